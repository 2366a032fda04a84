"""Layout of the result database on disk.

The database is a directory holding ``index.json`` and one subdirectory
``m<m>`` per field with the files ``polyhedron.json``, ``complex.json``,
``record.json`` and ``timings.json``.
"""

import logging
import os
import tempfile
from pathlib import Path

from bianchi.utils.exceptions import DatabaseError

logger = logging.getLogger(__name__)

INDEX_FILE = "index.json"
POLYHEDRON_FILE = "polyhedron.json"
COMPLEX_FILE = "complex.json"
RECORD_FILE = "record.json"
TIMINGS_FILE = "timings.json"


def field_dir(db_root: Path, m: int) -> Path:
    """Directory of one field.

    Examples:
        >>> field_dir(Path("db"), 7)
        PosixPath('db/m7')
    """
    return db_root / f"m{m}"


def artifact_path(db_root: Path, m: int, name: str) -> Path:
    """Path of a named file of one field.

    Raises:
        ValueError: If name is not one of the known artifact files
    """
    known = (POLYHEDRON_FILE, COMPLEX_FILE, RECORD_FILE, TIMINGS_FILE)
    if name not in known:
        raise ValueError(f"Unknown artifact: {name}. Valid artifacts: {', '.join(known)}")
    return field_dir(db_root, m) / name


def index_path(db_root: Path) -> Path:
    return db_root / INDEX_FILE


def atomic_write_bytes(path: Path, data: bytes) -> None:
    """Write a file through a temporary file in the same directory.

    Readers see either the old or the new content, never a partial file.

    Raises:
        DatabaseError: If the directory cannot be created or the file written
    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(data)
                f.flush()
                os.fsync(f.fileno())
            os.replace(tmp_name, path)
        except BaseException:
            Path(tmp_name).unlink(missing_ok=True)
            raise
    except OSError as e:
        raise DatabaseError(f"Failed to write {path}: {e}") from e
    logger.debug(f"Wrote {path} ({len(data)} bytes)")


def read_bytes(path: Path) -> bytes | None:
    """File content, or None if the file does not exist.

    Raises:
        DatabaseError: If the file exists but cannot be read
    """
    try:
        return path.read_bytes()
    except FileNotFoundError:
        return None
    except OSError as e:
        raise DatabaseError(f"Failed to read {path}: {e}") from e
