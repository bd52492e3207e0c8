from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import TextIO


@dataclass
class StepLog:
    """Per-transition record of an engine run.

    ``inputs_at_output[k]`` is the cumulative number of quotient tuples
    consumed when output ``k`` was emitted.
    """

    kinds: list[str] = field(default_factory=list)
    inputs_so_far: list[int] = field(default_factory=list)
    outputs_so_far: list[int] = field(default_factory=list)
    entry_bits: list[int] = field(default_factory=list)
    inputs_at_output: list[int] = field(default_factory=list)
    bits_at_output: list[int] = field(default_factory=list)
    states: list | None = None

    def record(self, kind: str, inputs: int, outputs: int, bits: int, state=None) -> None:
        self.kinds.append(kind)
        self.inputs_so_far.append(inputs)
        self.outputs_so_far.append(outputs)
        self.entry_bits.append(bits)
        if kind == "out":
            self.inputs_at_output.append(inputs)
            self.bits_at_output.append(bits)
        if self.states is not None:
            self.states.append(state)

    def __len__(self) -> int:
        return len(self.kinds)

    def write_csv(self, fh: TextIO, with_bits: bool = False) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        header = ["step", "kind", "inputs_so_far", "outputs_so_far"]
        if with_bits:
            header.append("max_entry_bits")
        writer.writerow(header)
        for i, kind in enumerate(self.kinds):
            row = [i + 1, kind, self.inputs_so_far[i], self.outputs_so_far[i]]
            if with_bits:
                row.append(self.entry_bits[i])
            writer.writerow(row)

    def to_csv(self, with_bits: bool = False) -> str:
        buf = io.StringIO()
        self.write_csv(buf, with_bits)
        return buf.getvalue()
