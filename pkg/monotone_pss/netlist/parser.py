from __future__ import annotations

from functools import partial
from pathlib import Path
from typing import cast

from attr import attrib, attrs
from marshmallow import ValidationError
from yaml import YAMLError

from monotone_pss.exceptions import NetlistValidationError
from monotone_pss.netlist.model import Netlist, NetlistSchema, RunSpec, RunSpecSchema
from monotone_pss.typing.loader import DocumentLoaderProtocol

EXAMPLES_DIR = Path(__file__).parent / "examples"
SCHEMA_PATH = Path(__file__).parent / "netlist.schema.json"


@attrs
class DocumentLoader(DocumentLoaderProtocol):
    class KIND:
        HOCON = "hocon"
        HJSON = "hjson"
        JSON = "json"
        JSON5 = "json5"
        TOML = "toml"
        YAML = "yaml"

    SUFFIXES = {
        ".conf": KIND.HOCON,
        ".hocon": KIND.HOCON,
        ".hjson": KIND.HJSON,
        ".json": KIND.JSON,
        ".json5": KIND.JSON5,
        ".toml": KIND.TOML,
        ".yaml": KIND.YAML,
        ".yml": KIND.YAML,
    }

    kind = attrib(kw_only=True)
    loader = attrib(kw_only=True)

    @kind.default
    def kind_default(self):
        return self.KIND.YAML if getattr(self, "loader", None) is None else None

    @loader.default
    def loader_default(self):
        return self.build_loader()

    @classmethod
    def for_path(cls, path: Path) -> DocumentLoader:
        return cls(kind=cls.SUFFIXES.get(Path(path).suffix.lower(), cls.KIND.YAML))

    def load(self, path: Path, *args, **kwargs):
        encoding = kwargs.pop("encoding", "utf-8")
        with Path(path).open(mode="r", encoding=encoding) as document_file:
            content = document_file.read()
        return self.loader(content, *args, **kwargs)

    def build_loader(self):
        if self.kind == self.KIND.YAML:
            from yaml import SafeLoader
            from yaml import load as load_yaml

            return partial(load_yaml, Loader=SafeLoader)
        elif self.kind == self.KIND.TOML:
            from tomli import loads as load_toml

            return load_toml
        elif self.kind == self.KIND.JSON:
            from json import loads as load_json

            return load_json
        elif self.kind == self.KIND.JSON5:
            from json5 import loads as load_json5

            return load_json5
        elif self.kind == self.KIND.HJSON:
            from hjson import loads as load_hjson

            return load_hjson
        elif self.kind == self.KIND.HOCON:
            from json import loads

            from pyhocon import ConfigFactory, HOCONConverter

            def load_hocon(s):
                return loads(HOCONConverter.to_json(ConfigFactory.parse_string(s)))

            return load_hocon
        raise NetlistValidationError(f"Unknown document kind {self.kind!r}")


def load_document(path) -> dict:
    path = Path(path)
    try:
        document = DocumentLoader.for_path(path).load(path)
    except OSError as e:
        raise NetlistValidationError(f"Cannot read {path}: {e.strerror}", str(path)) from e
    except (ValueError, YAMLError) as e:
        raise NetlistValidationError(f"Cannot parse {path}: {e}", str(path)) from e
    except ImportError as e:
        raise NetlistValidationError(f"Support for {path.suffix} documents needs the 'formats' extra: {e}") from e
    if not isinstance(document, dict):
        raise NetlistValidationError("Document must be a mapping", str(path))
    return document


def is_netlist(document: dict) -> bool:
    return "root" in document


def _load(schema, document: dict, source: str):
    try:
        return schema.load(document)
    except ValidationError as e:
        raise NetlistValidationError(f"Invalid document: {e.messages}", source) from e


def netlist_from_dict(document: dict, source: str = "<document>") -> Netlist:
    return cast(Netlist, _load(NetlistSchema(), document, source))


def run_spec_from_dict(document: dict, source: str = "<document>", base: Path | None = None) -> RunSpec:
    spec = cast(RunSpec, _load(RunSpecSchema(), document, source))
    if isinstance(spec.netlist, str):
        reference = Path(spec.netlist)
        if not reference.is_absolute() and base is not None:
            reference = base / reference
        spec.netlist = load_netlist(reference)
    return spec


def load_netlist(path) -> Netlist:
    """Netlist from a netlist document, or the netlist of a run spec document."""
    path = Path(path)
    document = load_document(path)
    if is_netlist(document):
        return netlist_from_dict(document, str(path))
    return load_run_spec(path).netlist


def load_run_spec(path) -> RunSpec:
    path = Path(path)
    return run_spec_from_dict(load_document(path), str(path), base=path.parent)


def bundled_examples() -> list[Path]:
    return sorted(path for path in EXAMPLES_DIR.iterdir() if path.suffix in DocumentLoader.SUFFIXES)


def schema_text() -> str:
    return SCHEMA_PATH.read_text(encoding="utf-8")
