import copy
import json

import pytest

from bsgroupoid.io import SchemaError, dumps, fixture_path, load, load_dict, load_fixture, save
from bsgroupoid.gog import validate_gog


FIXTURES = ["seg", "loop", "amal", "chain", "zline"]


def raw(name):
    return json.loads(fixture_path(name).read_text())


def test_seg_loads_and_validates():
    pf = load_fixture("seg")
    assert validate_gog(pf.graphs_of_groupoids["seg"]) == []
    assert pf.actions["pi1-on-forest"] == {"kind": "pi1-on-forest", "gog": "seg"}


@pytest.mark.parametrize("name", FIXTURES)
def test_round_trip_fixpoint(name, tmp_path):
    pf = load_fixture(name)
    p1 = tmp_path / "a.json"
    save(pf, p1)
    pf2 = load(p1)
    p2 = tmp_path / "b.json"
    save(pf2, p2)
    assert p1.read_text() == p2.read_text()
    assert json.loads(p1.read_text()) == json.loads(dumps(pf))
    assert json.loads(p1.read_text()) == raw(name)


def test_empty_units_schema_error():
    d = raw("seg")
    d["groupoids"]["G_e"]["units"] = []
    with pytest.raises(SchemaError) as exc:
        load_dict(d)
    assert "units must be nonempty" in str(exc.value)
    assert exc.value.pointer == "/groupoids/G_e/units"


def test_dangling_reference_pointer():
    d = raw("seg")
    d["graphs_of_groupoids"]["seg"]["graph"] = "nowhere"
    with pytest.raises(SchemaError) as exc:
        load_dict(d)
    assert exc.value.pointer == "/graphs_of_groupoids/seg/graph"
    d = raw("seg")
    d["groupoids"]["G_v"]["morphisms"][0]["src"] = "zz"
    with pytest.raises(SchemaError) as exc:
        load_dict(d)
    assert exc.value.pointer.startswith("/groupoids/G_v/morphisms/0")


def test_missing_field_and_unknown_section():
    d = raw("seg")
    del d["graphs"]["seg"]["vertices"]
    with pytest.raises(SchemaError):
        load_dict(d)
    d = raw("seg")
    d["mystery"] = {}
    with pytest.raises(SchemaError) as exc:
        load_dict(d)
    assert exc.value.pointer == "/mystery"


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(SchemaError):
        load(p)
