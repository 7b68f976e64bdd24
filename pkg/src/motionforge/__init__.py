"""motionforge: physical-scene compilation, condition rendering, and toy video synthesis."""

__version__ = "0.1.0"
