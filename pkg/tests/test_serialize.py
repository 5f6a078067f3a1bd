import json
import os

import pytest

from finsheaf import fixtures as fx
from finsheaf import serialize as ser
from finsheaf.canon import canonical_json
from finsheaf.errors import CrossReferenceError, ParseError
from finsheaf.presheaf import BasisPresheaf, presheaves_equal
from finsheaf.values import cyclic_group, finset

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


class TestSpaceRoundTrip:
    def test_bit_exact(self, pc4):
        payload = ser.space_to_payload(pc4)
        text = canonical_json(payload)
        back = ser.space_from_payload(json.loads(text))
        assert back == pc4
        assert canonical_json(ser.space_to_payload(back)) == text

    def test_basis_form(self):
        payload = {"schema": ser.SPACE_SCHEMA, "points": ["0", "1"],
                   "basis": [["1"], ["0", "1"]]}
        space = ser.space_from_payload(payload)
        assert len(space.opens) == 3

    def test_missing_opens(self):
        with pytest.raises(ParseError):
            ser.space_from_payload({"points": ["0"]})


class TestValueRoundTrip:
    def test_finset(self):
        obj = finset(["b", "a"])
        assert ser.value_from_payload(ser.value_to_payload(obj), "FinSet") == obj

    def test_finab_triples(self):
        z3 = cyclic_group(3)
        payload = ser.value_to_payload(z3)
        assert ["1", "2", "0"] in payload["add"]
        back = ser.value_from_payload(payload, "FinAb")
        assert back == z3


class TestPresheafRoundTrip:
    def test_full_presheaf(self, sierp_sheaf):
        payload = ser.presheaf_to_payload(sierp_sheaf)
        back = ser.presheaf_from_payload(json.loads(canonical_json(payload)))
        assert presheaves_equal(back, sierp_sheaf)
        assert canonical_json(ser.presheaf_to_payload(back)) == canonical_json(payload)

    def test_finab_presheaf(self, skyscraper):
        payload = ser.presheaf_to_payload(skyscraper)
        back = ser.presheaf_from_payload(payload)
        assert presheaves_equal(back, skyscraper)

    def test_basis_presheaf(self):
        doc = ser.load_json(os.path.join(FIXTURES, "disc2_basis.presheaf.json"))
        bp = ser.presheaf_from_payload(doc, FIXTURES)
        assert isinstance(bp, BasisPresheaf)
        assert len(bp.basis.members) == 2

    def test_space_by_reference(self, tmp_path, sierp_sheaf):
        space_path = tmp_path / "space.json"
        ser.dump_json(str(space_path), ser.space_to_payload(sierp_sheaf.space))
        payload = ser.presheaf_to_payload(sierp_sheaf)
        payload["space"] = "space.json"
        presheaf_path = tmp_path / "p.json"
        ser.dump_json(str(presheaf_path), payload)
        back = ser.presheaf_from_payload(
            ser.load_json(str(presheaf_path)), str(tmp_path))
        assert presheaves_equal(back, sierp_sheaf)

    def test_dangling_reference(self, sierp_sheaf, tmp_path):
        payload = ser.presheaf_to_payload(sierp_sheaf)
        payload["space"] = "missing.json"
        with pytest.raises(CrossReferenceError):
            ser.presheaf_from_payload(payload, str(tmp_path))

    def test_corrupted_identity_round_trips(self, sierp_sheaf):
        from finsheaf.presheaf import Presheaf
        from finsheaf.values import ValueMorphism

        whole = frozenset({"0", "1"})
        res = dict(sierp_sheaf.res)
        res[(whole, whole)] = ValueMorphism(
            sierp_sheaf.sections[whole], sierp_sheaf.sections[whole],
            {"s": "t", "t": "s"})
        bad = Presheaf(sierp_sheaf.space, "FinSet", sierp_sheaf.sections, res)
        payload = ser.presheaf_to_payload(bad)
        assert "0,1" in payload["restrictions"].get("0,1", {})
        back = ser.presheaf_from_payload(payload)
        from finsheaf.presheaf import validate_presheaf

        assert validate_presheaf(back) is False


class TestMapAndGluingRoundTrip:
    def test_map(self):
        m = fx.pc4_to_sierp()
        back = ser.map_from_payload(ser.map_to_payload(m))
        assert back.assignment == dict(m.assignment)

    def test_gluing_files(self):
        doc = ser.load_json(os.path.join(FIXTURES, "pc4_twisted.gluing.json"))
        d = ser.gluing_from_payload(doc, FIXTURES)
        assert sorted(d.covering) == ["1", "2"]
        again = ser.gluing_to_payload(d)
        assert canonical_json(again) == canonical_json(doc)

    def test_diagram_file(self):
        doc = ser.load_json(os.path.join(FIXTURES, "sierp_pair.diagram.json"))
        d = ser.diagram_from_payload(doc, FIXTURES)
        assert set(d.index.elements) == {"L", "R"}
        assert canonical_json(ser.diagram_to_payload(d)) == canonical_json(doc)
