"""Resumable sweep state as a versioned JSON text record.

Layout::

    {"format": "rsumset-checkpoint", "version": 1,
     "spec_hash": "...", "n_chunks": 12, "done": "110000000000",
     "chunks": {"0": {"counts": [...], "viols": [...], "collected": [...]}, ...}}

``done`` is the chunk bitmap; ``chunks`` holds the partial tallies of every
finished chunk, so a resumed run merges exactly what an uninterrupted run
would.
"""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field

from ..errors import CheckpointError

MAGIC = "rsumset-checkpoint"
VERSION = 1


@dataclass
class Checkpoint:
    spec_hash: str
    n_chunks: int
    chunks: dict[int, tuple] = field(default_factory=dict)

    @property
    def done(self) -> str:
        return "".join("1" if k in self.chunks else "0" for k in range(self.n_chunks))

    def save(self, path: str) -> None:
        record = {
            "format": MAGIC,
            "version": VERSION,
            "spec_hash": self.spec_hash,
            "n_chunks": self.n_chunks,
            "done": self.done,
            "chunks": {
                str(k): {"counts": list(c), "viols": [list(v) for v in vs], "collected": [list(x) for x in cs]}
                for k, (c, vs, cs) in sorted(self.chunks.items())
            },
        }
        d = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".ckpt-")
        with os.fdopen(fd, "w") as fh:
            json.dump(record, fh, sort_keys=True)
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str) -> "Checkpoint":
        with open(path) as fh:
            text = fh.read()
        try:
            rec = json.loads(text)
            if rec.get("format") != MAGIC:
                raise CheckpointError(f"{path} is not a sweep checkpoint")
            if rec.get("version") != VERSION:
                raise CheckpointError(f"unsupported checkpoint version {rec.get('version')}")
            ck = cls(rec["spec_hash"], int(rec["n_chunks"]))
            for k, c in rec["chunks"].items():
                ck.chunks[int(k)] = (
                    [int(x) for x in c["counts"]],
                    [tuple(v) for v in c["viols"]],
                    [tuple(x) for x in c["collected"]],
                )
        except CheckpointError:
            raise
        except (ValueError, KeyError, TypeError, AttributeError) as exc:
            raise CheckpointError(f"corrupt checkpoint {path}: {exc}") from None
        if ck.done != rec["done"]:
            raise CheckpointError(f"corrupt checkpoint {path}: chunk bitmap disagrees with tallies")
        return ck

    def check_compatible(self, spec_hash: str, n_chunks: int) -> None:
        if spec_hash != self.spec_hash or n_chunks != self.n_chunks:
            raise CheckpointError(
                f"checkpoint was written for sweep {self.spec_hash}, not {spec_hash}"
            )
