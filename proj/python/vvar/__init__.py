"""V-variable grayscale image codec.

Thin wrapper over the C++ extension module. Images are 2-D uint8 numpy
arrays (height, width); compressed codes are ``bytes`` in the .vvar format.
"""

from ._vvar import (
    CodeError,
    PgmError,
    constant_proportions,
    decode,
    decode_pixel,
    encode,
    from_square,
    load_pgm,
    min_depth,
    pareto_frontier,
    presets,
    psnr,
    save_pgm,
    storage_upper_bound,
    storage_with_constants,
    sweep,
    to_square,
    verify,
)

__all__ = [
    "CodeError",
    "PgmError",
    "constant_proportions",
    "decode",
    "decode_pixel",
    "encode",
    "from_square",
    "load_pgm",
    "min_depth",
    "pareto_frontier",
    "presets",
    "psnr",
    "save_pgm",
    "storage_upper_bound",
    "storage_with_constants",
    "sweep",
    "to_square",
    "verify",
]

__version__ = "0.1.0"
