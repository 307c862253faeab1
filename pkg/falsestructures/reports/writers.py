"""Artifact files of one run"""

from pathlib import Path

import numpy as np
import pandas as pd

from falsestructures.nn.network import Network
from falsestructures.nn.serialization import save_network
from falsestructures.reports.pgm import write_pgm
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

INCOMPLETE_MARKER = "INCOMPLETE"


class ArtifactWriter:
    """Writes every artifact under one directory and remembers the relative paths"""

    def __init__(self, output_dir: Path) -> None:
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.files: list[str] = []

    def _path(self, name: str) -> Path:
        path = self.output_dir / name
        path.parent.mkdir(parents=True, exist_ok=True)
        if name not in self.files:
            self.files.append(name)
        return path

    def write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        """Write a DataFrame without its index"""
        path = self._path(name)
        frame.to_csv(path, index=False)
        logger.info("Wrote %s (%d rows)", path, len(frame))
        return path

    def write_text(self, name: str, text: str) -> Path:
        """Write a text file"""
        path = self._path(name)
        path.write_text(text, encoding="utf-8")
        return path

    def write_network(self, name: str, net: Network) -> Path:
        """Serialise a network"""
        path = self._path(name)
        save_network(net, path)
        return path

    def write_pgm(self, name: str, image: np.ndarray) -> Path:
        """Dump a gray image"""
        path = self._path(name)
        write_pgm(path, image)
        return path

    def mark_incomplete(self, reason: str) -> Path:
        """Leave a marker telling that the artifact set is partial, listed like any other artifact"""
        path = self._path(INCOMPLETE_MARKER)
        path.write_text(reason + "\n", encoding="utf-8")
        logger.warning("Run incomplete, partial artifacts kept in %s", self.output_dir)
        return path
