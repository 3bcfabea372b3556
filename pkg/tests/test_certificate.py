import copy
import json

import pytest

from robustzero import (
    Box2,
    PolyPath,
    certify_miranda,
    certify_sign,
    verify_path_constraints,
    winding_number,
)
from robustzero import catalog
from robustzero.certificate import check_document, dumps, load_document, to_document, write_certificate


@pytest.fixture(scope="module")
def miranda_doc(phi, psi):
    return to_document(certify_miranda(phi, psi, 0.05, 14))


@pytest.fixture(scope="module")
def winding_doc(phi):
    z = catalog.MU_ZEROS[0]
    box = Box2.from_bounds(z[0] - 0.1, z[0] + 0.1, z[1] - 0.1, z[1] + 0.1)
    return to_document(winding_number(phi, PolyPath.box_boundary(box), 16))


def test_round_trip_through_file(tmp_path, miranda_doc):
    path = tmp_path / "cert.json"
    path.write_text(dumps(miranda_doc))
    doc = load_document(path)
    assert doc == json.loads(dumps(miranda_doc))
    assert check_document(doc).ok


def test_sign_and_path_certificates_check(phi, tmp_path):
    cert = certify_sign(phi, "re", Box2.from_bounds(3.1, 3.14159, -3, 3), -0.1, "le", 12)
    write_certificate(cert, tmp_path / "s.json")
    assert check_document(load_document(tmp_path / "s.json")).ok
    for c in verify_path_constraints(phi, catalog.GAMMA_DOWN, catalog.gamma_down_constraints(), 12):
        assert check_document(to_document(c)).ok


def test_winding_certificate_checks(winding_doc):
    res = check_document(winding_doc)
    assert res.ok, res.messages
    assert winding_doc["winding"] == -1


def test_floats_are_hexadecimal(miranda_doc):
    assert miranda_doc["margin"] == (0.05).hex()
    assert all(isinstance(x, str) and "p" in x for x in miranda_doc["map"]["base"])


def test_serialisation_is_deterministic(phi, psi):
    a = dumps(certify_miranda(phi, psi, 0.05, 14))
    b = dumps(certify_miranda(phi, psi, 0.05, 14))
    assert a == b


def test_raised_threshold_is_rejected(miranda_doc):
    doc = copy.deepcopy(miranda_doc)
    doc["margin"] = (0.06).hex()
    assert not check_document(doc).ok
    doc = copy.deepcopy(miranda_doc)
    for body in doc["edges"].values():
        body["threshold"] = (abs(float.fromhex(body["threshold"])) * 1.2 * (1 if body["direction"] == "ge" else -1)).hex()
    assert not check_document(doc).ok


def test_missing_leaf_is_rejected(miranda_doc):
    doc = copy.deepcopy(miranda_doc)
    edge = max(doc["edges"].values(), key=lambda b: len(b["leaves"]))
    assert len(edge["leaves"]) > 1
    edge["leaves"].pop(1)
    res = check_document(doc)
    assert not res.ok
    assert any("leaf" in m or "cover" in m for m in res.messages)


def test_tampered_polynomial_is_rejected(miranda_doc):
    doc = copy.deepcopy(miranda_doc)
    doc["poly"]["terms"][0][0] = (0.5).hex()
    assert not check_document(doc).ok
    del doc["poly"]["fingerprint"]
    assert not check_document(doc).ok


def test_moved_edge_is_rejected(miranda_doc):
    doc = copy.deepcopy(miranda_doc)
    doc["map"]["base"][0] = (float.fromhex(doc["map"]["base"][0]) + 0.5).hex()
    assert not check_document(doc).ok


def test_tampered_winding_is_rejected(winding_doc):
    doc = copy.deepcopy(winding_doc)
    doc["winding"] = 1
    assert not check_document(doc).ok
    doc = copy.deepcopy(winding_doc)
    doc["arcs"].pop()
    assert not check_document(doc).ok
    doc = copy.deepcopy(winding_doc)
    doc["modulus_floor"] = (1.0).hex()
    assert not check_document(doc).ok


def test_malformed_documents():
    assert not check_document({"format": "other"}).ok
    assert not check_document({"format": "robustzero-certificate/1"}).ok
