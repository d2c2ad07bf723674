from __future__ import annotations

from pathlib import Path
from typing import Any, Callable

from monotone_pss.typing import Protocol, runtime_checkable


@runtime_checkable
class DocumentLoaderProtocol(Protocol):
    kind: str | None
    loader: Callable[[str], Any]

    def load(self, path: Path, *args, **kwargs) -> Any:  # pragma: no cover
        ...
