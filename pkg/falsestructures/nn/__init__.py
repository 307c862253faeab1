"""Minimal reverse mode network engine"""

from falsestructures.nn.layers import Conv2d, Dense, Layer, LayerKind, MaxPool2d, ReLU, Sigmoid
from falsestructures.nn.losses import bce_grad, bce_loss, sigmoid
from falsestructures.nn.network import Network

__all__ = [
    "Conv2d",
    "Dense",
    "Layer",
    "LayerKind",
    "MaxPool2d",
    "Network",
    "ReLU",
    "Sigmoid",
    "bce_grad",
    "bce_loss",
    "sigmoid",
]
