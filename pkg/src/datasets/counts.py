"""
Coincidence-count tables and their CSV format.

File layout::

    # comment lines start with '#'
    setting,ppp,ppm,pmp,pmm,mpp,mpm,mmp,mmm
    000,1064,9,192,23,16,250,8,1227

``setting`` concatenates the parties' inputs; outcome columns spell the
outcome string with ``p`` for +1 and ``m`` for -1.
"""

import csv
import re
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Callable, Dict, Iterable, List, Mapping, Optional, TextIO, Tuple, Union

import numpy as np
import pandas as pd

from ..quantum.measurement import ProbabilityTable, Setting, outcome_labels
from ..utils.errors import LayoutError, NormalizationError, ParseError
from ..utils.logger import get_logger

logger = get_logger()

FIXTURES_DIR = Path(__file__).parent / "fixtures"
GHZ3_COUNTS_FIXTURE = FIXTURES_DIR / "ghz3_counts.csv"

Source = Union[str, Path, bytes, BinaryIO, TextIO]


def outcome_columns(n: int) -> List[str]:
    """CSV column names for n-party outcome strings."""
    return [label.replace("+", "p").replace("-", "m") for label in outcome_labels(n)]


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as e:
        line_number = data[:e.start].count(b"\n") + 1
        raise ParseError(f"invalid UTF-8 at byte {e.start}: {e.reason}", line_number)


def read_text(source: Source) -> str:
    """Text of a path, bytes or stream; strips a UTF-8 BOM and rejects invalid UTF-8."""
    if isinstance(source, (str, Path)):
        return _decode(Path(source).read_bytes())
    if isinstance(source, bytes):
        return _decode(source)
    data = source.read()
    if isinstance(data, bytes):
        return _decode(data)
    return data.lstrip("\ufeff")


def read_count_rows(
    source: Source,
    parse_setting: Callable[[str, int], str],
) -> Tuple[int, Dict[str, np.ndarray]]:
    """
    Parse a counts CSV into ``{setting string: counts}``.

    Args:
        source: Path, bytes or an open binary/text stream
        parse_setting: Validates and normalises a setting field; receives the
            field and the party count, raises ValueError on bad input

    Returns:
        (party count, rows in file order)
    """
    text = read_text(source)
    header: Optional[List[str]] = None
    n = 0
    rows: Dict[str, np.ndarray] = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([stripped]))]
        if header is None:
            header = fields
            n_outcomes = len(fields) - 1
            n = int(round(np.log2(n_outcomes))) if n_outcomes > 0 else 0
            if fields[0] != "setting" or n < 1 or 2 ** n != n_outcomes or fields[1:] != outcome_columns(n):
                raise ParseError(f"unexpected header {','.join(fields)!r}", line_number)
            continue
        if len(fields) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(fields)}", line_number)
        try:
            setting = parse_setting(fields[0], n)
        except ValueError as e:
            raise ParseError(str(e), line_number)
        if setting in rows:
            raise ParseError(f"duplicate setting {setting!r}", line_number)
        try:
            counts = np.array([int(value) for value in fields[1:]], dtype=np.int64)
        except ValueError:
            raise ParseError(f"counts must be integers in row {setting!r}", line_number)
        if (counts < 0).any():
            raise ParseError(f"negative count in row {setting!r}", line_number)
        rows[setting] = counts
    if header is None:
        raise ParseError("empty counts file")
    if not rows:
        raise ParseError("counts file has a header but no data rows")
    return n, rows


def _digit_setting(value: str, n: int) -> str:
    if not re.fullmatch(r"[0-9]+", value) or len(value) != n:
        raise ValueError(f"setting {value!r} must be {n} input digits")
    return value


@dataclass(frozen=True, eq=False)
class CountsTable:
    """Nonnegative coincidence counts keyed by setting string (e.g. ``"021"``)."""

    n_parties: int
    rows: Mapping[str, np.ndarray]

    def __post_init__(self):
        size = 2 ** self.n_parties
        rows: Dict[str, np.ndarray] = {}
        for key, values in self.rows.items():
            key = _digit_setting(key if isinstance(key, str) else "".join(str(s) for s in key), self.n_parties)
            values = np.array(values, dtype=np.int64).reshape(-1)
            if values.shape != (size,):
                raise LayoutError(f"row {key} needs {size} counts, got {values.shape[0]}")
            if (values < 0).any():
                raise LayoutError(f"row {key} has negative counts")
            values.setflags(write=False)
            rows[key] = values
        object.__setattr__(self, "rows", dict(sorted(rows.items())))

    def __contains__(self, setting) -> bool:
        return setting_key(setting) in self.rows

    def __getitem__(self, setting) -> np.ndarray:
        try:
            return self.rows[setting_key(setting)]
        except KeyError:
            raise LayoutError(f"counts have no row for setting {setting_key(setting)}")

    @property
    def settings(self) -> List[Setting]:
        return [tuple(int(c) for c in key) for key in self.rows]

    def total(self, setting) -> int:
        return int(self[setting].sum())

    @property
    def n_events(self) -> int:
        return int(sum(int(row.sum()) for row in self.rows.values()))

    def require(self, settings: Iterable[Setting]) -> None:
        missing = [setting_key(s) for s in settings if s not in self]
        if missing:
            raise LayoutError(f"counts are missing setting rows {', '.join(missing)}")

    def scaled(self, factor: int) -> "CountsTable":
        return CountsTable(self.n_parties, {k: v * int(factor) for k, v in self.rows.items()})

    def matrix(self, settings: Optional[Iterable[Setting]] = None) -> np.ndarray:
        """(rows, 2^N) count matrix in the given setting order."""
        settings = self.settings if settings is None else list(settings)
        return np.array([self[s] for s in settings], dtype=np.int64)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame.from_dict(
            {key: values for key, values in self.rows.items()},
            orient="index",
            columns=outcome_columns(self.n_parties),
        )
        frame.index.name = "setting"
        return frame


def setting_key(setting) -> str:
    if isinstance(setting, str):
        return setting
    return "".join(str(int(s)) for s in setting)


def load_counts(source: Source) -> CountsTable:
    """
    Load a counts CSV.

    Raises:
        ParseError: malformed header or row, duplicate setting, negative count
    """
    n, rows = read_count_rows(source, _digit_setting)
    table = CountsTable(n_parties=n, rows=rows)
    logger.info(f"load_counts: {len(rows)} setting rows, {table.n_events} events")
    return table


def load_ghz3_fixture() -> CountsTable:
    """Bundled tripartite inequality counts recorded in the experiment."""
    return load_counts(GHZ3_COUNTS_FIXTURE)


def write_counts(counts: CountsTable, stream: Optional[TextIO] = None) -> str:
    """Write counts in the CSV format, rows sorted by setting; returns the text."""
    frame = counts.to_frame().reset_index()
    text = frame.to_csv(index=False, lineterminator="\n")
    if stream is not None:
        stream.write(text)
    return text


def counts_to_probabilities(counts: CountsTable, settings: Optional[Iterable[Setting]] = None) -> ProbabilityTable:
    """Relative frequencies per row, weighted by the row totals."""
    settings = counts.settings if settings is None else [tuple(s) for s in settings]
    distributions = {}
    weights = {}
    for setting in settings:
        row = counts[setting]
        total = int(row.sum())
        if total == 0:
            raise NormalizationError(f"row {setting_key(setting)} has no counts")
        distributions[setting] = row / total
        weights[setting] = total
    return ProbabilityTable(n_parties=counts.n_parties, distributions=distributions, weights=weights)


def sample_counts(table: ProbabilityTable, trials: int, seed: int) -> CountsTable:
    """Multinomial counts with ``trials`` events per setting row."""
    if trials < 1:
        raise LayoutError(f"trials per setting must be positive, got {trials}")
    rng = np.random.default_rng(seed)
    rows = {}
    for setting in table.settings:
        probabilities = np.asarray(table[setting], dtype=float)
        rows[setting_key(setting)] = rng.multinomial(trials, probabilities / probabilities.sum())
    return CountsTable(n_parties=table.n_parties, rows=rows)
