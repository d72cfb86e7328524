#!/usr/bin/env python3
# SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
# SPDX-License-Identifier: Apache-2.0
"""Writes a population the way an external exporter would (struct-packed
float32 payloads, JSON manifest, labels file), runs `xplx analyze` on it and
checks the numbers. Also reads back payloads produced by `xplx synth`."""

import csv
import json
import math
import struct
import subprocess
import sys
import tempfile
from pathlib import Path

MAGIC = b"XPLXPRD1"


def write_payload(path, rows):
    e, m = len(rows), len(rows[0])
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<QQ", e, m))
        for row in rows:
            f.write(struct.pack("<%df" % m, *row))


def read_payload(path):
    data = Path(path).read_bytes()
    assert data[:8] == MAGIC, "bad magic"
    e, m = struct.unpack_from("<QQ", data, 8)
    assert len(data) == 24 + 4 * e * m, "size mismatch"
    values = struct.unpack_from("<%df" % (e * m), data, 24)
    return [list(values[i * m:(i + 1) * m]) for i in range(e)]


def as_stored(row):
    row = [struct.unpack("<f", struct.pack("<f", v))[0] for v in row]
    s = sum(row)
    return [v / s for v in row]


def entropy(p):
    return sum(-v * math.log2(v) for v in p if v > 0)


def argmax(p):
    best = 0
    for j, v in enumerate(p):
        if v > p[best]:
            best = j
    return best


def main():
    cli = sys.argv[1]
    failures = []
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        pop = {
            "c0": [[0.7, 0.2, 0.1], [0.1, 0.1, 0.8], [0.3, 0.4, 0.3]],
            "c1": [[0.6, 0.3, 0.1], [0.5, 0.25, 0.25], [1.0, 0.0, 0.0]],
            "c2": [[0.2, 0.7, 0.1], [0.0, 0.0, 1.0], [0.1, 0.6, 0.3]],
        }
        labels = [0, 2, 1]
        (tmp / "payloads").mkdir()
        entries = []
        for cid, rows in pop.items():
            write_payload(tmp / "payloads" / (cid + ".bin"), rows)
            entries.append({"id": cid, "architecture": "mlp", "train_fraction": 1.0,
                            "epoch_stage": "converged", "payload": "payloads/%s.bin" % cid})
        manifest = {"num_classes": 3, "num_examples": 3, "classifiers": entries}
        (tmp / "manifest.json").write_text(json.dumps(manifest))
        (tmp / "labels.txt").write_text("".join("%d\n" % y for y in labels))

        subprocess.run([cli, "analyze", "--manifest", str(tmp / "manifest.json"),
                        "--labels", str(tmp / "labels.txt"), "--out", str(tmp / "out"),
                        "--threads", "2"], check=True)
        with open(tmp / "out" / "examples.csv", newline="") as f:
            got = list(csv.DictReader(f))
        if len(got) != 3:
            failures.append("expected 3 example rows, got %d" % len(got))
        for e, row in enumerate(got):
            rows = [as_stored(pop[c][e]) for c in pop]
            cp = 2 ** (sum(entropy(r) for r in rows) / len(rows))
            xp = sum(1 for r in rows if argmax(r) != labels[e]) / len(rows)
            if abs(float(row["c_perplexity"]) - cp) > 5e-7:
                failures.append("example %d: c_perplexity %s vs %.6f" % (e, row["c_perplexity"], cp))
            if abs(float(row["x_perplexity"]) - xp) > 5e-7:
                failures.append("example %d: x_perplexity %s vs %.6f" % (e, row["x_perplexity"], xp))

        # payloads written by the tool are readable with plain struct
        subprocess.run([cli, "synth", "--classes", "4", "--examples", "6", "--tiers",
                        "a:2:0.5:0.9", "--out", str(tmp / "synth")], check=True,
                       stdout=subprocess.DEVNULL)
        synth_manifest = json.loads((tmp / "synth" / "manifest.json").read_text())
        for entry in synth_manifest["classifiers"]:
            rows = read_payload(tmp / "synth" / entry["payload"])
            if len(rows) != 6 or any(abs(sum(r) - 1.0) > 1e-3 for r in rows):
                failures.append("payload %s has bad rows" % entry["payload"])

        # a truncated payload is rejected with the input-error exit code
        data = (tmp / "payloads" / "c1.bin").read_bytes()
        (tmp / "payloads" / "c1.bin").write_bytes(data[:-4])
        res = subprocess.run([cli, "analyze", "--manifest", str(tmp / "manifest.json"),
                              "--labels", str(tmp / "labels.txt"), "--out", str(tmp / "out2")],
                             capture_output=True, text=True)
        if res.returncode != 2 or "c1" not in res.stderr:
            failures.append("truncated payload: exit %d, stderr %r" % (res.returncode, res.stderr))

    for f in failures:
        print("FAIL:", f)
    print("payload interop:", "ok" if not failures else "%d failure(s)" % len(failures))
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
