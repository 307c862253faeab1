"""Binary network container

Layout, all integers little endian:

    offset  size  content
    0       8     magic b"FSNETWK\\x00"
    8       1     format version (uint8, currently 1)
    9       1     input rank R (uint8)
    10      4*R   input dimensions (uint32 each)
    ...     4     layer count L (uint32)
    then L layer records:
            1     layer kind code (uint8): 0 dense, 1 conv2d, 2 maxpool2d, 3 relu, 4 sigmoid
            1     hyperparameter count H (uint8)
            4*H   hyperparameters (uint32) in the layer's declaration order
                    dense: in_dim, out_dim
                    conv2d: in_channels, filters, kernel_size
                    maxpool2d: pool_size
            1     parameter tensor count P (uint8), then P tensors in declaration order (weight, bias):
                    1     rank D (uint8)
                    4*D   dimensions (uint32)
                    8*n   float64 values, row major
"""

import struct
from pathlib import Path
from typing import BinaryIO

import numpy as np

from falsestructures.exceptions import DimensionError, SerializationError
from falsestructures.nn.layers import LayerKind, build_layer
from falsestructures.nn.network import Network
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

MAGIC = b"FSNETWK\x00"
FORMAT_VERSION = 1
KIND_CODES: dict[LayerKind, int] = {kind: code for code, kind in enumerate(LayerKind)}
CODE_KINDS: dict[int, LayerKind] = {code: kind for kind, code in KIND_CODES.items()}
HYPER_ORDER: dict[LayerKind, tuple[str, ...]] = {
    LayerKind.DENSE: ("in_dim", "out_dim"),
    LayerKind.CONV2D: ("in_channels", "filters", "kernel_size"),
    LayerKind.MAXPOOL2D: ("pool_size",),
    LayerKind.RELU: (),
    LayerKind.SIGMOID: (),
}


def _write_dims(stream: BinaryIO, dims: tuple[int, ...]) -> None:
    stream.write(struct.pack("<B", len(dims)))
    stream.write(struct.pack(f"<{len(dims)}I", *dims))


def _read(stream: BinaryIO, fmt: str) -> tuple:
    size = struct.calcsize(fmt)
    chunk = stream.read(size)
    if len(chunk) != size:
        raise SerializationError("unexpected end of network file")
    return struct.unpack(fmt, chunk)


def _read_dims(stream: BinaryIO) -> tuple[int, ...]:
    (rank,) = _read(stream, "<B")
    return _read(stream, f"<{rank}I") if rank else ()


def dump_network(net: Network, stream: BinaryIO) -> None:
    """Write net to an open binary stream"""
    stream.write(MAGIC)
    stream.write(struct.pack("<B", FORMAT_VERSION))
    _write_dims(stream, net.input_shape)
    stream.write(struct.pack("<I", len(net.layers)))
    for layer in net.layers:
        hyper = layer.hyper()
        values = [hyper[key] for key in HYPER_ORDER[layer.kind]]
        stream.write(struct.pack("<BB", KIND_CODES[layer.kind], len(values)))
        stream.write(struct.pack(f"<{len(values)}I", *values))
        stream.write(struct.pack("<B", len(layer.params)))
        for value in layer.params.values():
            _write_dims(stream, value.shape)
            stream.write(np.ascontiguousarray(value, dtype="<f8").tobytes())


def parse_network(stream: BinaryIO) -> Network:
    """Read a network written by dump_network"""
    if stream.read(len(MAGIC)) != MAGIC:
        raise SerializationError("not a network file (bad magic header)")
    (version,) = _read(stream, "<B")
    if version != FORMAT_VERSION:
        raise SerializationError(f"unsupported network format version {version}")
    input_shape = _read_dims(stream)
    (count,) = _read(stream, "<I")
    layers = []
    for _ in range(count):
        code, hyper_count = _read(stream, "<BB")
        if code not in CODE_KINDS:
            raise SerializationError(f"unknown layer kind code {code}")
        kind = CODE_KINDS[code]
        values = _read(stream, f"<{hyper_count}I") if hyper_count else ()
        layer = build_layer(kind, dict(zip(HYPER_ORDER[kind], values, strict=True)))
        (param_count,) = _read(stream, "<B")
        if param_count != len(layer.params):
            raise SerializationError(f"{kind.value} layer stores {param_count} tensors, expected {len(layer.params)}")
        for key in layer.params:
            dims = _read_dims(stream)
            if dims != layer.params[key].shape:
                raise SerializationError(f"{kind.value}.{key} has shape {dims}, expected {layer.params[key].shape}")
            size = int(np.prod(dims)) * 8
            chunk = stream.read(size)
            if len(chunk) != size:
                raise SerializationError("unexpected end of network file")
            layer.params[key] = np.frombuffer(chunk, dtype="<f8").astype(np.float64).reshape(dims)
        layer.zero_grad()
        layers.append(layer)
    try:
        return Network(layers, input_shape)
    except DimensionError as error:
        raise SerializationError(f"stored layers do not compose: {error.message}") from error


def save_network(net: Network, path: Path) -> None:
    """Write net to path"""
    with Path(path).open("wb") as stream:
        dump_network(net, stream)
    logger.info("Network saved to %s (%d parameters)", path, net.param_count)


def load_network(path: Path) -> Network:
    """Read a network from path"""
    with Path(path).open("rb") as stream:
        return parse_network(stream)
