"""cardocr: a low-compute OCR pipeline for camera-captured business cards."""

from .config import PipelineConfig
from .pipeline import run_pipeline, time_pipeline

__version__ = "0.1.0"

__all__ = ["PipelineConfig", "run_pipeline", "time_pipeline", "__version__"]
