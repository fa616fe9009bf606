import json
from datetime import date

from dcpareto.report import OutFormat, ReportTable, TableKind


def table():
    t = ReportTable(TableKind.AIC_TABLE, ["cutoff", "aic_nb", "best"], comments=["note"])
    t.add(cutoff=date(2021, 7, 1), aic_nb=683.1605, best="nb")
    t.add(cutoff=date(2021, 10, 1), aic_nb=float("nan"), best=None)
    return t


def test_csv():
    text = table().render(OutFormat.CSV)
    assert text.splitlines() == ["# note", "cutoff,aic_nb,best", "2021-07-01,683.1605,nb", "2021-10-01,,"]


def test_json():
    payload = json.loads(table().render("json"))
    assert payload["kind"] == "AicTable"
    assert payload["rows"][1] == {"cutoff": "2021-10-01", "aic_nb": None, "best": None}


def test_markdown():
    lines = table().render("markdown").splitlines()
    assert lines[0] == "<!-- note -->"
    assert lines[1] == "| cutoff | aic_nb | best |"
    assert lines[3] == "| 2021-07-01 | 683.1605 | nb |"
