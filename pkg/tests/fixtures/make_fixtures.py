"""Regenerate the synthetic fixtures (deterministic; run from any directory).

synthetic_who.csv   WHO layout, two locations, 2021-03-25 .. 2023-01-05,
                    iid WDLNP counts (heavy tail, few zeros)
synthetic_owid.csv  OWID layout, one location, 2022-05-19 .. 2023-01-01,
                    about 60% zeros with WDWP positives
wdwp_small.csv      generic layout, 300 WDWP draws
"""

from datetime import date, timedelta
from pathlib import Path

import numpy as np

from dcpareto import CompositeParams, DiscreteComposite, Lognormal, Weibull

HERE = Path(__file__).parent


def days(start: date, end: date):
    return [start + timedelta(days=i) for i in range((end - start).days + 1)]


def who():
    span = days(date(2021, 3, 25), date(2023, 1, 5))
    lines = ["Date_reported,Country_code,Country,WHO_region,New_cases,Cumulative_cases"]
    models = {
        "Synthland": (CompositeParams(Lognormal(4.0, 1.2), 1.4, 300.0), 1),
        "Otherland": (CompositeParams(Weibull(0.9, 80.0), 2.5, 150.0), 2),
    }
    for name, (params, seed) in models.items():
        counts = DiscreteComposite(params).sample(seed, len(span))
        total = 0
        for d, c in zip(span, counts):
            total += int(c)
            lines.append(f"{d.isoformat()},XX,{name},XXX,{int(c)},{total}")
    (HERE / "synthetic_who.csv").write_text("\n".join(lines) + "\n")


def owid():
    span = days(date(2022, 5, 19), date(2023, 1, 1))
    rng = np.random.default_rng(3)
    pos = np.maximum(DiscreteComposite(CompositeParams(Weibull(0.8, 20.0), 1.3, 40.0)).sample(4, len(span)), 1)
    counts = np.where(rng.random(len(span)) < 0.6, 0, pos)
    lines = ["location,iso_code,date,total_cases,new_cases"]
    total = 0
    for d, c in zip(span, counts):
        total += int(c)
        lines.append(f"Testland,TST,{d.isoformat()},{total},{int(c)}")
    (HERE / "synthetic_owid.csv").write_text("\n".join(lines) + "\n")


def generic():
    counts = DiscreteComposite(CompositeParams(Weibull(1.2, 50.0), 1.5, 100.0)).sample(5, 300)
    lines = ["date,count"] + [f"{d.isoformat()},{int(c)}" for d, c in zip(days(date(2020, 1, 1), date(2021, 1, 1)), counts)]
    (HERE / "wdwp_small.csv").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    who()
    owid()
    generic()
