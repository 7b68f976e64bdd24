#!/usr/bin/env python3
"""Sweep the attention-mixing weight and report the flicker of the toy output.

Usage: python scripts/alpha_sweep.py [--steps 10] [--seed 7] [--conditions DIR]

Writes a CSV to stdout; one row per alpha. At full scale, larger alpha means
more moving-object fidelity and more flicker; the toy backend only exercises
the machinery, so treat the direction here as a property of the toy setup.
"""

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

from motionforge.frames import load_condition_dir
from motionforge.metrics import motion_smoothness_proxy, temporal_flickering
from motionforge.synthesis.backends import ToyBackend
from motionforge.synthesis.sampler import SynthesisConfig, sample_video

ALPHAS = [0.0, 0.1, 0.25, 0.4, 0.5, 0.75, 0.9, 1.0]


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--steps", type=int, default=10)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--conditions",
                        default=ROOT / "tests" / "fixtures" / "conditions_8f")
    args = parser.parse_args()

    seq = load_condition_dir(args.conditions)
    print("alpha,flicker,smoothness_proxy")
    for alpha in ALPHAS:
        cfg = SynthesisConfig(steps=args.steps, seed=args.seed, alpha=alpha)
        stack = sample_video(seq, cfg, ToyBackend())
        frames = list(stack.to_uint8())
        print(f"{alpha},{temporal_flickering(frames):.7f},"
              f"{motion_smoothness_proxy(frames):.7f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
