"""Loading netlist documents from disk."""
import json
import textwrap

import pytest

from monotone_pss import const
from monotone_pss.exceptions import NetlistValidationError
from monotone_pss.netlist import DocumentLoader, bundled_examples, load_netlist, load_run_spec, schema_text
from monotone_pss.netlist.parser import load_document
from monotone_pss.network import Series, leaves


def test_loader_kind_from_suffix(tmp_path):
    assert DocumentLoader.for_path(tmp_path / "circuit.json").kind == DocumentLoader.KIND.JSON
    assert DocumentLoader.for_path(tmp_path / "circuit.YML").kind == DocumentLoader.KIND.YAML
    assert DocumentLoader.for_path(tmp_path / "circuit.txt").kind == DocumentLoader.KIND.YAML


def test_json_netlist(tmp_path):
    path = tmp_path / "divider.json"
    path.write_text(json.dumps({"schema_version": 1, "root": {"series": [{"resistor": 1}, {"resistor": 3}]}}))

    netlist = load_netlist(path)

    assert isinstance(netlist.root, Series)
    assert [item.device.resistance for _, item in leaves(netlist.root)] == [1.0, 3.0]


def test_run_spec_resolves_relative_netlist(tmp_path):
    (tmp_path / "circuits").mkdir()
    (tmp_path / "circuits" / "r.yaml").write_text("schema_version: 1\nroot:\n  resistor: 4\n")
    spec_path = tmp_path / "circuits" / "run.yaml"
    spec_path.write_text(
        textwrap.dedent(
            """\
            netlist: r.yaml
            drive:
              kind: voltage
              bias: 1
            """
        )
    )

    spec = load_run_spec(spec_path)

    assert spec.netlist.root == load_netlist(tmp_path / "circuits" / "r.yaml").root
    assert load_netlist(spec_path).root.device.resistance == 4.0


@pytest.mark.parametrize(
    "content, message",
    [
        ("- resistor: 1\n", "must be a mapping"),
        ("root: [unclosed\n", "Cannot parse"),
        ("", "must be a mapping"),
    ],
)
def test_unusable_documents(tmp_path, content, message):
    path = tmp_path / "broken.yaml"
    path.write_text(content)

    with pytest.raises(NetlistValidationError, match=message):
        load_document(path)


def test_missing_document(tmp_path):
    with pytest.raises(NetlistValidationError, match="Cannot read"):
        load_netlist(tmp_path / "absent.yaml")


def test_missing_referenced_netlist(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("netlist: absent.yaml\ndrive: {kind: current}\n")

    with pytest.raises(NetlistValidationError, match="Cannot read"):
        load_run_spec(path)


@pytest.mark.formats
def test_toml_netlist(tmp_path):
    pytest.importorskip("tomli")
    path = tmp_path / "r.toml"
    path.write_text('schema_version = 1\n[root]\nresistor = 2.0\n')

    assert load_netlist(path).root.device.resistance == 2.0


@pytest.mark.formats
def test_json5_netlist(tmp_path):
    pytest.importorskip("json5")
    path = tmp_path / "r.json5"
    path.write_text("{schema_version: 1, root: {capacitor: 2}, // comment\n}")

    assert load_netlist(path).root.device.capacitance == 2.0


@pytest.mark.parametrize("path", bundled_examples(), ids=lambda path: path.name)
def test_bundled_examples_load(path):
    netlist = load_netlist(path)

    assert netlist.schema_version == const.SCHEMA_VERSION
    assert leaves(netlist.root)


def test_bundled_examples():
    names = [path.name for path in bundled_examples()]

    assert names == [
        "envelope_current.yaml",
        "envelope_detector.yaml",
        "envelope_voltage.yaml",
        "parallel_rc.yaml",
        "single_resistor.yaml",
    ]
    spec = load_run_spec(bundled_examples()[2])
    assert spec.solver["algorithm"] == "dr"
    assert spec.netlist.root.name == "detector"


def test_schema_lists_every_node_kind():
    schema = json.loads(schema_text())

    assert schema["properties"]["schema_version"] == {"const": const.SCHEMA_VERSION}
    assert set(const.ELEMENT_KINDS + const.COMPOSITE_KINDS) <= set(schema["$defs"])
