import csv
import json
import math

import pytest

CSV_COLUMNS = [
    "schema_version", "alpha", "N", "p_s", "p_u", "engine", "gate_family",
    "observable", "mean_abs", "std_error", "n_circuits", "n_time_samples",
    "master_seed",
]


def write_table(path, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def sweep_row(**kw):
    row = {
        "schema_version": "1", "alpha": "2", "N": "64", "p_s": "0.5",
        "p_u": "0", "engine": "fast", "gate_family": "none",
        "observable": "S_spt", "mean_abs": "0.1", "std_error": "0.01",
        "n_circuits": "100", "n_time_samples": "10000", "master_seed": "1",
    }
    row.update({k: str(v) for k, v in kw.items()})
    return row


@pytest.fixture
def sweep_csv(tmp_path):
    """Two observables x three sizes x five p_s values, smooth synthetic."""
    rows = []
    for n in (64, 128, 256):
        for i, p in enumerate((0.3, 0.4, 0.5, 0.6, 0.7)):
            spt = 0.5 * math.exp(-6 * p) * (64 / n) ** 0.5 + 0.02
            rows.append(sweep_row(N=n, p_s=p, observable="S_spt",
                                  mean_abs=round(spt, 6)))
            rows.append(sweep_row(N=n, p_s=p, observable="S_triv",
                                  mean_abs=round(0.4 * p ** 2, 6)))
    path = tmp_path / "sweep.csv"
    write_table(path, rows)
    return str(path)


@pytest.fixture
def spectrum_csv(tmp_path):
    path = tmp_path / "spectrum.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step", "value"])
        for step in (100, 110, 120):
            for k in range(8):
                writer.writerow([step, 0.25 * 0.5 ** (k // 4) / (1 + 0.01 * k)])
    return str(path)


@pytest.fixture
def phase_json(tmp_path):
    """1-D strip in p_s at fixed p_u with three regions plus grey edges."""
    labels = ["SPT", "SPT", "undetermined", "volume", "volume",
              "undetermined", "trivial", "trivial"]
    points = [{"alpha": 2, "p_s": round(0.15 + 0.05 * i, 2), "p_u": 0.2,
               "label": label, "b": {}, "b_err": {}}
              for i, label in enumerate(labels)]
    path = tmp_path / "phase.json"
    path.write_text(json.dumps({"mode": "phase-diagram", "points": points}))
    return str(path)
