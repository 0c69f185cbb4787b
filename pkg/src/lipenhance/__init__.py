"""Gray-level image enhancement with logarithmic operations on (-1, 1).

Brightness is corrected by the logarithmic translation that maximizes the
mean dynamic range, contrast by per-sign logarithmic scalings that maximize
the mean dynamic range of the positive and of the negative gray levels.
"""
from .enhancement import EnhanceOptions, EnhancementReport, enhance
from .gray_algebra import (
    GrayImage,
    log_add,
    log_product,
    log_scalar_mul,
    log_sub,
    phi,
    phi_inv,
)
from .image_io import PixelImage, from_gray_domain, read_pgm, to_gray_domain, write_pgm
from .range_statistics import classical_stats, image_mean_dynamic_range, log_stats

__all__ = [
    "EnhanceOptions", "EnhancementReport", "enhance",
    "GrayImage", "log_add", "log_product", "log_scalar_mul", "log_sub", "phi", "phi_inv",
    "PixelImage", "from_gray_domain", "read_pgm", "to_gray_domain", "write_pgm",
    "classical_stats", "image_mean_dynamic_range", "log_stats",
]
