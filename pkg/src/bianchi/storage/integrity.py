"""Content hashing of database artifacts.

Records store the hash of the canonical bytes of every artifact, so a file
changed on disk is detected before its content is trusted.
"""

import hashlib
import logging
from pathlib import Path

from bianchi.utils.exceptions import DatabaseError

logger = logging.getLogger(__name__)


class ArtifactHasher:
    """Computes and checks content hashes of artifacts.

    Attributes:
        hash_algorithm: The hash algorithm to use (e.g., 'sha256')
    """

    def __init__(self, hash_algorithm: str = "sha256"):
        """Initialize the hasher.

        Args:
            hash_algorithm: Hash algorithm for artifact hashes

        Raises:
            DatabaseError: If the hash algorithm is not available
        """
        if hash_algorithm not in hashlib.algorithms_available:
            raise DatabaseError(
                f"Hash algorithm '{hash_algorithm}' is not available. "
                f"Available algorithms: {', '.join(sorted(hashlib.algorithms_available))}"
            )
        self.hash_algorithm = hash_algorithm

    def hash_bytes(self, data: bytes) -> str:
        hasher = hashlib.new(self.hash_algorithm)
        hasher.update(data)
        return hasher.hexdigest()

    def hash_file(self, file_path: Path) -> str:
        """Hash a file's contents, reading it in chunks.

        Raises:
            DatabaseError: If the file cannot be read
        """
        try:
            hasher = hashlib.new(self.hash_algorithm)
            with file_path.open("rb") as f:
                for chunk in iter(lambda: f.read(8192), b""):
                    hasher.update(chunk)
            return hasher.hexdigest()
        except OSError as e:
            raise DatabaseError(f"Failed to compute hash for {file_path}: {e}") from e

    def matches(self, file_path: Path, expected: str) -> bool:
        """True if the file exists and has the expected hash."""
        if not file_path.exists():
            logger.debug(f"{file_path} is missing")
            return False
        actual = self.hash_file(file_path)
        if actual != expected:
            logger.warning(f"Hash mismatch for {file_path}: expected {expected[:8]}..., got {actual[:8]}...")
            return False
        return True
