"""Distribution tables and 2x2 chi-square tests over expression records."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Union

from centering.engine import AnalysisResult, ExpressionRecord, ExpressionTag
from centering.model import Form, SequenceLabel

ROWS = ("zero", "strong", "np", "poss")
COLUMNS = ("continue", "retain", "shift", "cent_est", "other")
SEQUENCE_COLUMNS = ("cont_cont_plus_shift_cont", "ret_cont")

FORM_ROW = {
    Form.ZERO: "zero",
    Form.STRONG_PRONOUN: "strong",
    Form.FULL_NP: "np",
    Form.POSSESSIVE_NP: "poss",
}
TAG_COLUMN = {
    ExpressionTag.CONTINUE: "continue",
    ExpressionTag.RETAIN: "retain",
    ExpressionTag.SHIFT: "shift",
    ExpressionTag.CENT_ESTAB: "cent_est",
    ExpressionTag.OTHER_EXCLUDED: "other",
}

# df=1 critical values for p = 0.05, 0.01, 0.001
CRITICAL_VALUES = ((10.828, "p<0.001"), (6.635, "p<0.01"), (3.841, "p<0.05"))


class Significance(Enum):
    NS = "ns"
    P05 = "p<0.05"
    P01 = "p<0.01"
    P001 = "p<0.001"


class InvalidTableError(ValueError):
    pass


@dataclass(frozen=True)
class _Table:
    rows: tuple[str, ...]
    columns: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def cell(self, row: str, column: str) -> int:
        return self.counts[self.rows.index(row)][self.columns.index(column)]

    def row_total(self, row: str) -> int:
        return sum(self.counts[self.rows.index(row)])

    def column_total(self, column: str) -> int:
        j = self.columns.index(column)
        return sum(r[j] for r in self.counts)

    @property
    def total(self) -> int:
        return sum(map(sum, self.counts))

    def as_dict(self) -> dict[str, tuple[int, ...]]:
        return dict(zip(self.rows, self.counts))


@dataclass(frozen=True)
class DistributionTable(_Table):
    rows: tuple[str, ...] = ROWS
    columns: tuple[str, ...] = COLUMNS
    counts: tuple[tuple[int, ...], ...] = ((0,) * 5,) * 4


@dataclass(frozen=True)
class SequenceTable(_Table):
    rows: tuple[str, ...] = ("zero", "strong")
    columns: tuple[str, ...] = SEQUENCE_COLUMNS
    counts: tuple[tuple[int, ...], ...] = ((0, 0), (0, 0))


@dataclass(frozen=True)
class ContingencyTable2x2:
    a: int
    b: int
    c: int
    d: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ContingencyTable2x2":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.a, self.b), (self.c, self.d)

    def transpose(self) -> "ContingencyTable2x2":
        return ContingencyTable2x2(self.a, self.c, self.b, self.d)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    df: int
    significance: Significance


def _records(results: Iterable[Union[AnalysisResult, ExpressionRecord]]) -> list[ExpressionRecord]:
    out = []
    for r in results:
        if isinstance(r, AnalysisResult):
            out.extend(r.expression_records)
        else:
            out.append(r)
    return out


def distribution_table(results: Iterable[Union[AnalysisResult, ExpressionRecord]]) -> DistributionTable:
    """Count subject expressions by form and transition tag.

    Accepts analysis results or bare records.  Records tagged new_entity
    or none, and forms without a row, are not counted.
    """
    counts = [[0] * len(COLUMNS) for _ in ROWS]
    for rec in _records(results):
        row = FORM_ROW.get(rec.form)
        col = TAG_COLUMN.get(rec.tag)
        if row is None or col is None:
            continue
        counts[ROWS.index(row)][COLUMNS.index(col)] += 1
    return DistributionTable(counts=tuple(map(tuple, counts)))


def sequence_table(results: Iterable[Union[AnalysisResult, ExpressionRecord]]) -> SequenceTable:
    counts = {"zero": [0, 0], "strong": [0, 0]}
    for rec in _records(results):
        row = FORM_ROW.get(rec.form)
        if row not in counts or rec.tag is not ExpressionTag.CONTINUE:
            continue
        if rec.sequence in (SequenceLabel.CONT_CONT, SequenceLabel.SHIFT_CONT):
            counts[row][0] += 1
        elif rec.sequence is SequenceLabel.RET_CONT:
            counts[row][1] += 1
    return SequenceTable(counts=(tuple(counts["zero"]), tuple(counts["strong"])))


def significance(statistic: float) -> Significance:
    for critical, label in CRITICAL_VALUES:
        if statistic > critical:
            return Significance(label)
    return Significance.NS


def chi_square(table: ContingencyTable2x2) -> ChiSquareResult:
    """Pearson chi-square on a 2x2 table, no continuity correction.

    >>> round(chi_square(ContingencyTable2x2(56, 24, 13, 20)).statistic, 3)
    9.204
    """
    observed = table.rows()
    if min(table.a, table.b, table.c, table.d) < 0:
        raise InvalidTableError("counts must be non-negative")
    row_sums = [sum(r) for r in observed]
    col_sums = [observed[0][j] + observed[1][j] for j in range(2)]
    n = sum(row_sums)
    if 0 in row_sums or 0 in col_sums:
        raise InvalidTableError(f"table {observed} has a zero marginal")
    statistic = 0.0
    for i in range(2):
        for j in range(2):
            expected = row_sums[i] * col_sums[j] / n
            statistic += (observed[i][j] - expected) ** 2 / expected
    return ChiSquareResult(statistic, 1, significance(statistic))


def _split(table: DistributionTable, rows: Sequence[str], column: str) -> tuple[int, int]:
    hit = sum(table.cell(r, column) for r in rows)
    return hit, sum(table.row_total(r) for r in rows) - hit


def grouped_table(
    table: DistributionTable, rows_a: Sequence[str], rows_b: Sequence[str], column: str
) -> ContingencyTable2x2:
    """Rows grouped into two sets, one column against all the others."""
    a, b = _split(table, rows_a, column)
    c, d = _split(table, rows_b, column)
    return ContingencyTable2x2(a, b, c, d)


@dataclass(frozen=True)
class ChiSquareTest:
    name: str
    table: ContingencyTable2x2
    reported: float
    result: ChiSquareResult | None
    note: str = ""


def subject_tests(dist: DistributionTable, seq: SequenceTable) -> list[ChiSquareTest]:
    """The four zero/strong/NP contrasts, built from the two tables."""
    specs = [
        (
            "zero vs other expressions, continue vs rest",
            grouped_table(dist, ["zero"], ["strong", "np", "poss"], "continue"),
            33.760,
        ),
        (
            "full and possessive NPs vs zero and strong, cent_est vs rest",
            grouped_table(dist, ["np", "poss"], ["zero", "strong"], "cent_est"),
            21.401,
        ),
        (
            "zero vs strong, continue vs rest",
            grouped_table(dist, ["zero"], ["strong"], "continue"),
            9.204,
        ),
        (
            "zero vs strong, cont_cont+shift_cont vs ret_cont",
            ContingencyTable2x2.from_rows(seq.counts),
            10.910,
        ),
    ]
    tests = []
    for name, table, reported in specs:
        try:
            result = chi_square(table)
            note = ""
        except InvalidTableError as exc:
            result, note = None, str(exc)
        tests.append(ChiSquareTest(name, table, reported, result, note))
    return tests


@dataclass(frozen=True)
class Share:
    label: str
    numerator: int
    denominator: int

    @property
    def percent(self) -> float | None:
        if self.denominator == 0:
            return None
        return 100.0 * self.numerator / self.denominator


def shares(dist: DistributionTable, seq: SequenceTable) -> list[Share]:
    out = []
    cont = dist.column_total("continue")
    for row in ROWS:
        out.append(Share(f"{row} share of continue", dist.cell(row, "continue"), cont))
    for row in ROWS:
        out.append(Share(f"continue share of {row}", dist.cell(row, "continue"), dist.row_total(row)))
    out.append(
        Share(
            "zero share of continue among zero+strong",
            dist.cell("zero", "continue"),
            dist.cell("zero", "continue") + dist.cell("strong", "continue"),
        )
    )
    out.append(
        Share(
            "np+poss share of cent_est",
            dist.cell("np", "cent_est") + dist.cell("poss", "cent_est"),
            dist.column_total("cent_est"),
        )
    )
    for j, col in enumerate(SEQUENCE_COLUMNS):
        out.append(
            Share(f"zero share of {col}", seq.counts[0][j], seq.counts[0][j] + seq.counts[1][j])
        )
    return out


@dataclass(frozen=True)
class Report:
    distribution: DistributionTable
    sequence: SequenceTable
    tests: tuple[ChiSquareTest, ...]
    shares: tuple[Share, ...]


def build_report(results: Iterable[Union[AnalysisResult, ExpressionRecord]]) -> Report:
    records = _records(results)
    dist = distribution_table(records)
    seq = sequence_table(records)
    return Report(dist, seq, tuple(subject_tests(dist, seq)), tuple(shares(dist, seq)))


def _fmt_pct(share: Share) -> str:
    pct = share.percent
    return "n/a" if pct is None else f"{pct:.1f}%"


def _fmt_test(test: ChiSquareTest) -> str:
    if test.result is None:
        return f"chi2=n/a ({test.note})"
    return f"chi2={test.result.statistic:.3f} df={test.result.df} {test.result.significance.value}"


def _table_rows(table: _Table, first: str) -> list[list[str]]:
    rows = [[first, "total", *table.columns]]
    for name, counts in zip(table.rows, table.counts):
        rows.append([name, str(sum(counts)), *map(str, counts)])
    rows.append(["total", str(table.total), *(str(table.column_total(c)) for c in table.columns)])
    return rows


def _plain(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for k, r in enumerate(rows):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _markdown(rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(rows[0]) + " |", "|" + "|".join("---" for _ in rows[0]) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows[1:]]
    return "\n".join(lines)


def render_report(report: Report, fmt: str = "plain") -> str:
    """Render as ``plain``, ``csv`` (long format, one header row) or ``md``."""
    if fmt not in ("plain", "csv", "md"):
        raise ValueError(f"unknown report format {fmt!r}")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["section", "row", "column", "value"])
        for name, table in (("distribution", report.distribution), ("sequence", report.sequence)):
            for row, counts in zip(table.rows, table.counts):
                for col, value in zip(table.columns, counts):
                    writer.writerow([name, row, col, value])
        for t in report.tests:
            stat = "" if t.result is None else f"{t.result.statistic:.3f}"
            sig = "" if t.result is None else t.result.significance.value
            writer.writerow(["chi2", t.name, "statistic", stat])
            writer.writerow(["chi2", t.name, "significance", sig])
            writer.writerow(["chi2", t.name, "reported", f"{t.reported:.3f}"])
        for s in report.shares:
            pct = s.percent
            writer.writerow(["share", s.label, f"{s.numerator}/{s.denominator}", "" if pct is None else f"{pct:.1f}"])
        return buf.getvalue()

    table_fn = _markdown if fmt == "md" else _plain
    heading = (lambda t: f"## {t}") if fmt == "md" else (lambda t: t)
    parts = [
        heading("Distribution of centering transitions"),
        table_fn(_table_rows(report.distribution, "type")),
        "",
        heading("Pronoun occurrences by sequence"),
        table_fn(_table_rows(report.sequence, "type")),
        "",
        heading("Chi-square tests"),
    ]
    bullet = "- " if fmt == "md" else "  "
    for t in report.tests:
        rows = t.table.rows()
        parts.append(f"{bullet}{t.name}: {list(map(list, rows))} {_fmt_test(t)} (reported {t.reported:.3f})")
    parts += ["", heading("Shares")]
    for s in report.shares:
        parts.append(f"{bullet}{s.label}: {s.numerator}/{s.denominator} = {_fmt_pct(s)}")
    return "\n".join(parts) + "\n"


def report(results: Iterable[Union[AnalysisResult, ExpressionRecord]], fmt: str = "plain") -> str:
    return render_report(build_report(results), fmt)
