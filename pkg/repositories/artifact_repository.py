"""
File-system artifact repository.
Artifacts arrive fully rendered, so a failed run never leaves partial output.
"""
import logging
import os
from typing import List, Mapping

from domain.exceptions import InputIOError
from repositories.interfaces import IArtifactRepository

logger = logging.getLogger(__name__)


class FileArtifactRepository(IArtifactRepository):
    """Writes artifacts as UTF-8 files into one output directory."""

    def __init__(self, output_directory: str):
        self.output_directory = output_directory

    def save_all(self, artifacts: Mapping[str, str]) -> List[str]:
        try:
            os.makedirs(self.output_directory, exist_ok=True)
            paths = []
            for name in sorted(artifacts):
                path = os.path.join(self.output_directory, name)
                with open(path, "w", encoding="utf-8", newline="") as f:
                    f.write(artifacts[name])
                paths.append(path)
        except OSError as e:
            raise InputIOError(f"Cannot write artifacts to {self.output_directory}: {e}")
        logger.info("Wrote %d artifacts to %s", len(paths), self.output_directory)
        return paths

    def names(self) -> List[str]:
        if not os.path.isdir(self.output_directory):
            return []
        return sorted(os.listdir(self.output_directory))
