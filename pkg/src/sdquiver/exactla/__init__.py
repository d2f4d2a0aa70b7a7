"""Exact rational linear algebra."""

from sdquiver.exactla.kernels import BACKEND
from sdquiver.exactla.matrix import (
    Rational,
    RMatrix,
    block,
    block_diag,
    coker_projection,
    det,
    eval_pencil,
    format_rational,
    hstack,
    image_basis,
    inverse,
    kernel_basis,
    kron,
    left_kernel,
    rank,
    right_inverse,
    rref,
    star,
    submatrix,
    to_rational,
    vstack,
)

__all__ = [
    "BACKEND",
    "Rational",
    "RMatrix",
    "block",
    "block_diag",
    "coker_projection",
    "det",
    "eval_pencil",
    "format_rational",
    "hstack",
    "image_basis",
    "inverse",
    "kernel_basis",
    "kron",
    "left_kernel",
    "rank",
    "right_inverse",
    "rref",
    "star",
    "submatrix",
    "to_rational",
    "vstack",
]
