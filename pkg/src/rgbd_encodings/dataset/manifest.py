"""
Dataset manifests.

A manifest is a CSV file with columns ``sample_id,left,right,label`` and the
optional ``container`` and ``split`` columns. Paths are stored relative to
the manifest's directory.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Literal

import pandas as pd
from pydantic import BaseModel, Field, model_validator

from ..errors import EmptyDatasetError
from .splitting import DEFAULT_SPLIT_RATIO, split_dataset

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("sample_id", "left", "right", "label")
OPTIONAL_COLUMNS = ("container", "split")

Split = Literal["train", "test"]


class DatasetEntry(BaseModel):
    """One sample: a stereo pair, its label image and optionally its encoded container."""

    sample_id: str = Field(description="Unique sample identifier")
    left: str = Field(description="Left image path, relative to the manifest")
    right: str = Field(description="Right image path, relative to the manifest")
    label: str = Field(description="Label image path, relative to the manifest")
    container: str | None = Field(default=None, description="Encoded container path")
    split: Split | None = Field(default=None, description="Split assignment")


class DatasetIndex(BaseModel):
    """The samples of a dataset, their split assignment and the split seed."""

    entries: list[DatasetEntry] = Field(default_factory=list)
    root: Path = Field(default=Path("."), description="Directory the entry paths are relative to")
    split_seed: int | None = Field(default=None, description="Seed the split was drawn with")

    @model_validator(mode="after")
    def _unique_ids(self) -> DatasetIndex:
        ids = [entry.sample_id for entry in self.entries]
        if len(ids) != len(set(ids)):
            duplicates = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"Duplicate sample ids: {duplicates}")
        return self

    def __len__(self) -> int:
        return len(self.entries)

    def resolve(self, relative: str) -> Path:
        """Absolute-ish path of a manifest-relative entry path."""
        return self.root / relative

    def subset(self, split: Split) -> DatasetIndex:
        """Entries assigned to one split."""
        return DatasetIndex(
            entries=[e for e in self.entries if e.split == split], root=self.root, split_seed=self.split_seed
        )

    def with_split(self, ratio: float = DEFAULT_SPLIT_RATIO, seed: int = 0) -> DatasetIndex:
        """
        Assign every entry to train or test with ``split_dataset``.

        Returns:
            A new DatasetIndex with the split column filled in

        Raises:
            EmptyDatasetError: If the index has no entries
        """
        train, _ = split_dataset([e.sample_id for e in self.entries], ratio, seed)
        train_ids = set(train)
        entries = [
            e.model_copy(update={"split": "train" if e.sample_id in train_ids else "test"}) for e in self.entries
        ]
        return DatasetIndex(entries=entries, root=self.root, split_seed=seed)

    def to_dataframe(self) -> pd.DataFrame:
        rows = [entry.model_dump() for entry in self.entries]
        frame = pd.DataFrame(rows, columns=[*REQUIRED_COLUMNS, *OPTIONAL_COLUMNS])
        return frame.dropna(axis="columns", how="all")

    def write(self, path: Path | str) -> Path:
        """
        Write the manifest CSV.

        Returns:
            The written path
        """
        file_path = Path(path)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        self.to_dataframe().to_csv(file_path, index=False)
        logger.info("Wrote manifest with %d samples to %s", len(self), file_path)
        return file_path

    @classmethod
    def read(cls, path: Path | str) -> DatasetIndex:
        """
        Read a manifest CSV.

        Returns:
            DatasetIndex rooted at the manifest's directory

        Raises:
            FileNotFoundError: If the manifest does not exist
            EmptyDatasetError: If it has no rows
            ValueError: If required columns are missing
        """
        file_path = Path(path)
        if not file_path.exists():
            raise FileNotFoundError(f"Manifest not found: {file_path}")
        frame = pd.read_csv(file_path, dtype=str, keep_default_na=False)
        missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
        if missing:
            raise ValueError(f"{file_path}: missing columns {missing}")
        if frame.empty:
            raise EmptyDatasetError(f"{file_path}: manifest has no samples")

        entries = []
        for record in frame.to_dict(orient="records"):
            for column in OPTIONAL_COLUMNS:
                if record.get(column, "") == "":
                    record[column] = None
            entries.append(DatasetEntry.model_validate(record))
        return cls(entries=entries, root=file_path.parent)
