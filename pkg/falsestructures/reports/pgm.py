"""16 bit binary PGM (P5) dumps of gray images"""

from pathlib import Path

import numpy as np

from falsestructures.exceptions import SerializationError

PGM_LOW = -0.01
PGM_HIGH = 1.01
MAX_VALUE = 65535


def encode_pgm(image: np.ndarray, low: float = PGM_LOW, high: float = PGM_HIGH) -> bytes:
    """Map [low, high] affinely onto 0..65535 and pack as big endian P5"""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2:
        raise SerializationError(f"PGM needs a 2D image, got shape {image.shape}")
    scaled = np.rint((image - low) / (high - low) * MAX_VALUE)
    levels = np.clip(scaled, 0, MAX_VALUE).astype(">u2")
    height, width = image.shape
    return f"P5\n{width} {height}\n{MAX_VALUE}\n".encode("ascii") + levels.tobytes()


def decode_pgm(data: bytes) -> np.ndarray:
    """Raw levels of a P5 file written by encode_pgm"""
    parts = data.split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P5":
        raise SerializationError("not a binary PGM file")
    width, height = (int(value) for value in parts[1].split())
    if int(parts[2]) != MAX_VALUE:
        raise SerializationError(f"unsupported PGM max value {int(parts[2])}")
    levels = np.frombuffer(parts[3], dtype=">u2")
    if levels.size != width * height:
        raise SerializationError(f"PGM holds {levels.size} pixels, header says {width}x{height}")
    return levels.reshape(height, width).astype(np.int64)


def write_pgm(path: Path, image: np.ndarray) -> None:
    """Write image to path"""
    Path(path).write_bytes(encode_pgm(image))
