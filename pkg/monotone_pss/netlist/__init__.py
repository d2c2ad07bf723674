"""Netlist and run spec documents."""
from __future__ import annotations

from monotone_pss.netlist.model import Drive, Netlist, RunSpec
from monotone_pss.netlist.parser import (
    DocumentLoader,
    bundled_examples,
    load_netlist,
    load_run_spec,
    netlist_from_dict,
    run_spec_from_dict,
    schema_text,
)

__all__ = [
    "DocumentLoader",
    "Drive",
    "Netlist",
    "RunSpec",
    "bundled_examples",
    "load_netlist",
    "load_run_spec",
    "netlist_from_dict",
    "run_spec_from_dict",
    "schema_text",
]
