"""Regenerate crates/core/tests/data/boston.csv.

The housing table ships inside scikit-learn wheels up to 1.1.x. This script
downloads one such wheel with pip, pulls out the csv and rewrites it with
lowercase headers, no count line and the original CRLF endings.

    python scripts/fetch_boston.py [output]
"""

import csv
import io
import pathlib
import subprocess
import sys
import tempfile
import zipfile

WHEEL = "scikit-learn==1.1.3"
MEMBER = "sklearn/datasets/data/boston_house_prices.csv"
DEFAULT_OUT = pathlib.Path(__file__).resolve().parent.parent / "crates/core/tests/data/boston.csv"


def main() -> None:
    out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT_OUT
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "--only-binary=:all:", "-d", tmp, WHEEL],
            check=True,
        )
        wheel = next(pathlib.Path(tmp).glob("*.whl"))
        with zipfile.ZipFile(wheel) as zf:
            text = zf.read(MEMBER).decode()

    rows = list(csv.reader(io.StringIO(text)))
    # First line is "506,13,..." followed by the header.
    header = [h.strip().lower() for h in rows[1]]
    body = [r for r in rows[2:] if r]
    assert len(body) == 506, len(body)

    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\r\n")
        w.writerow(header)
        w.writerows(body)
    print(f"wrote {len(body)} rows to {out}")


if __name__ == "__main__":
    main()
