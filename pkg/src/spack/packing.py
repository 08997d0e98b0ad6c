"""Packing sequences, the dominance order and sequence classes."""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterable

# Larger than the diameter of any graph the codecs accept.
UNBOUNDED_VALUE = 1 << 20


class Extension(enum.Enum):
    REPEAT_LAST = "+"
    UNBOUNDED = "!"


class SequenceError(ValueError):
    pass


class ClassEmptyError(SequenceError):
    pass


@dataclass(frozen=True)
class PackingSequence:
    """Finite non-decreasing prefix ``(s_1, ..., s_m)`` plus a rule for ``i > m``."""

    values: tuple[int, ...]
    extension: Extension = Extension.REPEAT_LAST

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise SequenceError("a packing sequence needs at least one term")
        if any(v < 1 for v in values):
            raise SequenceError(f"terms must be positive: {values}")
        if any(a > b for a, b in zip(values, values[1:])):
            raise SequenceError(f"terms must be non-decreasing: {values}")

    @classmethod
    def of(cls, *values: int, extension: Extension = Extension.REPEAT_LAST) -> PackingSequence:
        return cls(tuple(values), extension)

    @classmethod
    def arithmetic(cls, length: int = 64) -> PackingSequence:
        """``(1, 2, 3, ...)``: the classical packing coloring."""
        return cls(tuple(range(1, length + 1)), Extension.UNBOUNDED)

    @classmethod
    def proper(cls) -> PackingSequence:
        """``(1, 1, 1, ...)``: ordinary proper coloring."""
        return cls((1,), Extension.REPEAT_LAST)

    @classmethod
    def parse(cls, text: str) -> PackingSequence:
        """Parse ``"1,3^2+"`` style text; ``^`` is a run length, the suffix picks the tail rule.

        Without a suffix the last term repeats.
        """
        text = text.strip().replace(" ", "")
        if text.startswith("(") and text.endswith(")"):
            text = text[1:-1]
        extension = Extension.REPEAT_LAST
        if text.endswith(("+", "!")):
            extension = Extension(text[-1])
            text = text[:-1]
        if not text:
            raise SequenceError("empty sequence text")
        values: list[int] = []
        for token in text.split(","):
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", token)
            if not m:
                raise SequenceError(f"bad sequence term {token!r}")
            values.extend([int(m.group(1))] * int(m.group(2) or 1))
        return cls(tuple(values), extension)

    def text(self) -> str:
        parts = []
        for value, run in itertools.groupby(self.values):
            count = len(list(run))
            parts.append(f"{value}^{count}" if count > 1 else str(value))
        return ",".join(parts) + self.extension.value

    def __str__(self) -> str:
        return self.text()

    def __len__(self) -> int:
        return len(self.values)

    def value_at(self, i: int) -> int:
        """``s_i`` for a 1-based color index."""
        if i < 1:
            raise IndexError(f"color index must be >= 1, got {i}")
        if i <= len(self.values):
            return self.values[i - 1]
        if self.extension is Extension.REPEAT_LAST:
            return self.values[-1]
        return UNBOUNDED_VALUE

    def prefix(self, k: int) -> tuple[int, ...]:
        return tuple(self.value_at(i) for i in range(1, k + 1))

    def leading_ones(self, limit: int) -> int:
        count = 0
        while count < limit and self.value_at(count + 1) == 1:
            count += 1
        return count

    def capped(self, cap: int, length: int) -> PackingSequence:
        return PackingSequence(tuple(min(v, cap) for v in self.prefix(length)), Extension.REPEAT_LAST)


def dominates(s2: PackingSequence, s1: PackingSequence) -> bool:
    """``s2 >= s1`` coordinatewise, compared through both extension rules."""
    m = max(len(s1), len(s2)) + 1
    return all(s2.value_at(i) >= s1.value_at(i) for i in range(1, m + 1))


_CLASS_TOKEN = re.compile(r"(\d+)(bar)?")


@dataclass(frozen=True)
class SequenceClass:
    """Set of packing sequences given by per-index pins and lower bounds.

    ``constraints[i]`` is ``("=", v)`` or ``(">=", v)`` for color index ``i + 1``;
    indices past the tuple are unconstrained apart from monotonicity.
    """

    constraints: tuple[tuple[str, int], ...]

    @classmethod
    def parse(cls, name: str) -> SequenceClass:
        """``"S1-3-4bar"`` means ``s_1 = 1, s_2 = 3, s_3 >= 4``."""
        body = name.strip()
        if body[:1] in ("S", "s"):
            body = body[1:]
        out = []
        for token in body.split("-"):
            m = _CLASS_TOKEN.fullmatch(token)
            if not m:
                raise SequenceError(f"bad class token {token!r} in {name!r}")
            out.append((">=" if m.group(2) else "=", int(m.group(1))))
        return cls(tuple(out))

    def name(self) -> str:
        return "S" + "-".join(f"{v}bar" if op == ">=" else str(v) for op, v in self.constraints)

    def __str__(self) -> str:
        return self.name()

    def pin(self, index: int, value: int) -> SequenceClass:
        """Return the class with ``s_index`` fixed to ``value``."""
        items = list(self.constraints)
        while len(items) < index:
            items.append((">=", 1))
        items[index - 1] = ("=", value)
        return SequenceClass(tuple(items))

    def admits(self, seq: PackingSequence) -> bool:
        for i, (op, v) in enumerate(self.constraints, start=1):
            s = seq.value_at(i)
            if (op == "=" and s != v) or (op == ">=" and s < v):
                return False
        return True


def class_representatives(cls: SequenceClass, k: int, d: int) -> list[PackingSequence]:
    """Finite sample of ``cls`` covering its behaviour on ``k`` colors and diameter ``<= d``.

    Each free coordinate ranges over ``{lb, lb + 1, d}`` (clipped to ``>= lb``),
    where ``lb`` is its own or the inherited lower bound; terms past ``k`` repeat.
    """
    if k < 1 or d < 1:
        raise ValueError("k and d must be positive")
    length = max(k, len(cls.constraints))
    lower = []
    upper = []
    choices: list[list[int]] = []
    lb = 1
    for i in range(length):
        op, v = cls.constraints[i] if i < len(cls.constraints) else (">=", 1)
        lb = max(lb, v)
        lower.append(lb)
        if op == "=":
            choices.append([v])
        else:
            choices.append(sorted({lb, lb + 1 if lb + 1 < d else max(lb, d), max(lb, d)}))
    # later pins bound earlier free terms from above
    cap = None
    for i in reversed(range(length)):
        op, v = cls.constraints[i] if i < len(cls.constraints) else (">=", 1)
        if op == "=":
            cap = v if cap is None else min(cap, v)
        upper.append(cap)
    upper.reverse()
    for i in range(length):
        op, v = cls.constraints[i] if i < len(cls.constraints) else (">=", 1)
        if op == "=" and v < lower[i]:
            raise ClassEmptyError(f"class {cls} is empty: s_{i + 1} = {v} below bound {lower[i]}")
        if upper[i] is not None:
            choices[i] = [c for c in choices[i] if c <= upper[i]]
        if not choices[i]:
            raise ClassEmptyError(f"class {cls} is empty at s_{i + 1}")
    seen = []
    for combo in itertools.product(*choices):
        if any(a > b for a, b in zip(combo, combo[1:])):
            continue
        seq = PackingSequence(combo[:length], Extension.REPEAT_LAST)
        if seq not in seen:
            seen.append(seq)
    if not seen:
        raise ClassEmptyError(f"class {cls} admits no non-decreasing sequence")
    return seen


def parse_sequences(texts: Iterable[str]) -> list[PackingSequence]:
    return [PackingSequence.parse(t) for t in texts]
