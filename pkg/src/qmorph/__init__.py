"""Quantum grayscale-morphology image segmentation on NEQR images.

Reversible circuits for dilation, erosion, top-hat/bottom-hat and threshold
binarization, two simulators to run them, a classical oracle to check them,
and gate-cost accounting.
"""
from .core import Circuit, RegisterLayout, concat, validate
from .morph import HatMode, build_pipeline, segment
from .neqr import BinaryImage, GrayImage, decode_register, encode_image
from .oracle import o_segment
from .sim import BasisEnsemble, exact_distribution, run_dense, run_ensemble, sample

__all__ = [
    "BasisEnsemble",
    "BinaryImage",
    "Circuit",
    "GrayImage",
    "HatMode",
    "RegisterLayout",
    "build_pipeline",
    "concat",
    "decode_register",
    "encode_image",
    "exact_distribution",
    "o_segment",
    "run_dense",
    "run_ensemble",
    "sample",
    "segment",
    "validate",
]
