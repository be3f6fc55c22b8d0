"""Regenerate tests/data/iris.csv and tests/data/automobile.csv."""

import argparse
import pathlib

import pandas as pd
from sklearn.datasets import load_iris

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"


def iris():
    bunch = load_iris(as_frame=True)
    df = bunch.frame.rename(
        columns={
            "sepal length (cm)": "sepal_length",
            "sepal width (cm)": "sepal_width",
            "petal length (cm)": "petal_length",
            "petal width (cm)": "petal_width",
        }
    )
    df["species"] = [bunch.target_names[t] for t in df.pop("target")]
    return df


def automobile():
    import statsmodels

    src = pathlib.Path(statsmodels.__file__).parent / "gam" / "tests" / "results" / "autos.csv"
    df = pd.read_csv(src).drop(columns=["loss"]).dropna()
    return df.rename(columns={"fuel.sys": "fuel_sys", "comp.ratio": "comp_ratio"})


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=pathlib.Path, default=OUT)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, frame, fmt in (("iris", iris(), None), ("automobile", automobile(), "%g")):
        path = args.out / f"{name}.csv"
        frame.to_csv(path, index=False, float_format=fmt, lineterminator="\r\n")
        print(f"{path}: {len(frame)} rows")


if __name__ == "__main__":
    main()
