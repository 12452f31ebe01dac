from pathlib import Path
from typing import Optional, Tuple
import logging

from models.records import ExperimentSummaryRecord
from nonlocality.search import ExperimentSummary, SearchConfig, random_experiment
from services.file_service import FileService, file_service

logger = logging.getLogger(__name__)

CSV_HEADER = (
    "index",
    "sub_seed",
    "passed",
    "p_success",
    "max_residual",
    "lp_checked",
    "lp_infeasible",
)


def _csv_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


class ExperimentService:
    """Runs random-state experiments and stores their CSV and summary"""

    def __init__(self, files: Optional[FileService] = None):
        self.files = files or file_service

    def run(
        self,
        n: int,
        count: int,
        seed: int,
        out: str,
        cfg: Optional[SearchConfig] = None,
        lp_subsample: Optional[int] = None,
        jobs: Optional[int] = None,
        progress: Optional[bool] = None,
    ) -> Tuple[ExperimentSummary, Path, Path]:
        """Returns the summary, the CSV path and the summary JSON path"""
        cfg = cfg or SearchConfig(seed=seed)
        summary = random_experiment(
            n, count, seed, cfg, lp_subsample=lp_subsample, jobs=jobs, progress=progress
        )

        rows = [
            [
                _csv_value(v)
                for v in (
                    r.index,
                    r.seed,
                    r.passed,
                    r.p_success,
                    r.max_residual,
                    r.lp_checked,
                    r.lp_infeasible,
                )
            ]
            for r in summary.records
        ]
        csv_path = self.files.write_csv(out, CSV_HEADER, rows)
        json_path = self.files.write_record(
            csv_path.with_suffix(".summary.json"), ExperimentSummaryRecord.from_summary(summary)
        )
        self.files.write_manifest(
            "experiment",
            {
                "n": n,
                "count": count,
                "lp_subsample": lp_subsample,
                "jobs": jobs,
                "search": cfg.model_dump(),
            },
            outputs=[csv_path, json_path],
            seed=seed,
        )
        if summary.failed:
            logger.warning(f"{summary.failed}/{count} states found no Hardy settings")
        return summary, csv_path, json_path


# Singleton instance
experiment_service = ExperimentService()
