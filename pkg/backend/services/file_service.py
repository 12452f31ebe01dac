from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence, Type, TypeVar, Union
import csv
import hashlib
import json
import logging

from pydantic import BaseModel

from config.settings import settings
from models.records import DistributionRecord, RunManifest

logger = logging.getLogger(__name__)

Record = TypeVar("Record", bound=BaseModel)
PathLike = Union[str, Path]


class FileService:
    """Reads and writes JSON records and CSV tables, each output with a manifest"""

    def __init__(self, output_dir: Optional[PathLike] = None):
        self.output_dir = Path(output_dir or settings.OUTPUT_DIR)

    def resolve(self, path: PathLike) -> Path:
        """Relative output paths land in the output directory"""
        path = Path(path)
        if not path.is_absolute() and path.parent == Path("."):
            path = self.output_dir / path
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def read_record(self, path: PathLike, model: Type[Record]) -> Record:
        """Parse a JSON file into a record model"""
        try:
            with open(path, "r", encoding="utf-8") as handle:
                return model.model_validate(json.load(handle))
        except Exception as e:
            logger.error(f"Error reading {model.__name__} from {path}: {e}")
            raise

    def write_record(self, path: PathLike, record: BaseModel) -> Path:
        path = self.resolve(path)
        path.write_text(record.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.info(f"Wrote {path}")
        return path

    def write_csv(self, path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        path = self.resolve(path)
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        logger.info(f"Wrote {path}")
        return path

    def write_distribution_csv(self, path: PathLike, record: DistributionRecord) -> Path:
        """Long format: one row per (s, r) entry"""
        rows = (
            (s, r, repr(value))
            for s, row in enumerate(record.p)
            for r, value in enumerate(row)
        )
        return self.write_csv(path, ("s", "r", "p"), rows)

    @staticmethod
    def digest(path: PathLike) -> str:
        sha = hashlib.sha256()
        with open(path, "rb") as handle:
            for chunk in iter(lambda: handle.read(65536), b""):
                sha.update(chunk)
        return sha.hexdigest()

    def write_manifest(
        self,
        command: str,
        parameters: Dict[str, Any],
        outputs: Sequence[PathLike],
        inputs: Sequence[PathLike] = (),
        seed: Optional[int] = None,
    ) -> Path:
        """Write <first output>.manifest.json next to the outputs"""
        manifest = RunManifest(
            command=command,
            parameters=parameters,
            seed=seed,
            version=settings.VERSION,
            inputs={str(p): self.digest(p) for p in inputs},
            outputs={str(p): self.digest(p) for p in outputs},
        )
        first = Path(outputs[0])
        path = first.with_name(first.name + ".manifest.json")
        path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return path


# Singleton instance
file_service = FileService()
