"""Exception types raised across the package."""

from __future__ import annotations


class TwonnError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(TwonnError):
    """Input data violates a structural invariant."""


class NonFinite(ValidationError):
    def __init__(self, row: int, col: int):
        self.row = row
        self.col = col
        super().__init__(f"non-finite coordinate at row {row}, column {col}")


class TooFewPoints(ValidationError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"need at least 3 points, got {n}")


class RaggedRows(ValidationError):
    def __init__(self, msg: str = "rows have inconsistent lengths"):
        super().__init__(msg)


class DimensionMismatch(ValidationError):
    def __init__(self, got: int, expected: int):
        self.got = got
        self.expected = expected
        super().__init__(f"dimension mismatch: got {got}, expected {expected}")


class OutsideBox(ValidationError):
    """A coordinate falls outside [0, box_length) under a periodic metric."""

    def __init__(self, row: int, col: int):
        self.row = row
        self.col = col
        super().__init__(
            f"coordinate at row {row}, column {col} lies outside [0, box_length)"
        )


class NotSquare(ValidationError):
    def __init__(self, rows: int, cols: int):
        self.rows = rows
        self.cols = cols
        super().__init__(f"distance matrix must be square, got {rows}x{cols}")


class AsymmetricMatrix(ValidationError):
    def __init__(self, i: int, j: int, a: float, b: float):
        self.i = i
        self.j = j
        super().__init__(
            f"matrix asymmetric beyond tolerance at ({i},{j}): {a!r} vs {b!r}"
        )


class NegativeDistance(ValidationError):
    def __init__(self, i: int, j: int, value: float):
        self.i = i
        self.j = j
        self.value = value
        super().__init__(f"negative distance {value!r} at ({i},{j})")


class NonzeroDiagonal(ValidationError):
    def __init__(self, i: int, value: float):
        self.i = i
        self.value = value
        super().__init__(f"distance matrix diagonal entry {value!r} at index {i}")


class DuplicatePoints(TwonnError):
    """Coincident points make mu = r2/r1 undefined (r1 = 0)."""

    def __init__(self, pairs: list[tuple[int, int]]):
        self.pairs = pairs
        shown = ", ".join(f"({i},{j})" for i, j in pairs[:5])
        more = "" if len(pairs) <= 5 else f" (+{len(pairs) - 5} more)"
        super().__init__(
            f"coincident point pairs with zero distance: {shown}{more};"
            " pass drop_duplicates to remove all-but-first of each group"
        )


class EstimationError(TwonnError):
    """The estimator cannot produce a dimension from the given sample."""


class NoSpread(EstimationError):
    def __init__(self, msg: str = "all mu values equal 1; no spread to fit"):
        super().__init__(msg)


class TooFewAfterDiscard(EstimationError):
    def __init__(self, n_kept: int):
        self.n_kept = n_kept
        super().__init__(
            f"only {n_kept} fittable point(s) remain after discard; need at least 2"
        )


class BlockTooSmall(TwonnError):
    def __init__(self, block_size: int):
        self.block_size = block_size
        super().__init__(f"block size {block_size} is below the minimum of 3")


class BlockTooLarge(TwonnError):
    def __init__(self, block_size: int, n_total: int):
        self.block_size = block_size
        self.n_total = n_total
        super().__init__(f"block size {block_size} exceeds dataset size {n_total}")


class ScanError(TwonnError):
    """Estimation failed inside a scan block; carries the block coordinates."""

    def __init__(self, block_size: int, block_index: int, cause: Exception):
        self.block_size = block_size
        self.block_index = block_index
        super().__init__(
            f"estimation failed in block {block_index} at block_size {block_size}: {cause}"
        )
        self.__cause__ = cause


class UnsupportedCombination(TwonnError):
    def __init__(self, msg: str):
        super().__init__(msg)


class ParseError(TwonnError):
    def __init__(self, path: str, line: int, column: int | None = None, detail: str = ""):
        self.path = path
        self.line = line
        self.column = column
        where = f"{path}:{line}" + ("" if column is None else f":{column}")
        super().__init__(f"parse error at {where}" + (f": {detail}" if detail else ""))
