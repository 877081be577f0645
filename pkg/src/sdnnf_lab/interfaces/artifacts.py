"""Artifact repository interface.

Artifacts are text files addressed by slash-separated names. Implementations
store and fetch raw text; the typed helpers here encode and decode the lab's
formats on top of that.
"""
from abc import ABC, abstractmethod
from typing import TypeVar

import orjson
import structlog
from pydantic import BaseModel

from sdnnf_lab.circuits import nnf_format
from sdnnf_lab.circuits.manager import ManagerPool
from sdnnf_lab.circuits.strdnnf import StrDnnf
from sdnnf_lab.compiler import trace as trace_format
from sdnnf_lab.compiler.trace import CompilationTrace
from sdnnf_lab.errors import FormatError
from sdnnf_lab.graphs.charged_graph import ChargedGraph
from sdnnf_lab.logic.cnf import Cnf, parse_dimacs, to_dimacs
from sdnnf_lab.logic.vtree import Vtree

logger = structlog.get_logger(__name__)

ReportT = TypeVar("ReportT", bound=BaseModel)

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_NON_STR_KEYS


class ArtifactRepository(ABC):
    """Abstract repository for lab artifacts."""

    @abstractmethod
    async def save_text(self, name: str, text: str) -> str:
        """Store text under a name; returns where it went."""

    @abstractmethod
    async def load_text(self, name: str) -> str:
        """Fetch text by name; raises FileNotFoundError when absent."""

    @abstractmethod
    async def exists(self, name: str) -> bool:
        """Check whether an artifact exists."""

    @abstractmethod
    async def list_names(self, prefix: str = "") -> list[str]:
        """Names starting with a prefix, sorted."""

    # Typed helpers

    async def save_cnf(self, name: str, f: Cnf) -> str:
        return await self.save_text(name, to_dimacs(f))

    async def load_cnf(self, name: str) -> Cnf:
        return parse_dimacs(await self.load_text(name))

    async def save_graph(self, name: str, g: ChargedGraph) -> str:
        return await self.save_text(name, g.dumps())

    async def load_graph(self, name: str) -> ChargedGraph:
        return ChargedGraph.loads(await self.load_text(name))

    async def save_vtree(self, name: str, vtree: Vtree) -> str:
        return await self.save_text(name, vtree.dumps())

    async def load_vtree(self, name: str) -> Vtree:
        return Vtree.loads(await self.load_text(name))

    async def save_circuit(self, name: str, s: StrDnnf, vtree_name: str) -> str:
        return await self.save_text(name, nnf_format.dumps(s, vtree_name))

    async def load_circuit(self, name: str, pool: ManagerPool, vtree: Vtree | None = None) -> StrDnnf:
        """Load an NNF file; without an explicit vtree its `c vtree` reference is followed."""
        text = await self.load_text(name)
        if vtree is None:
            ref = nnf_format.vtree_reference(text)
            if ref is None:
                raise FormatError("nnf", f"{name} names no vtree")
            vtree = await self.load_vtree(ref)
        return nnf_format.loads(text, pool.get(vtree))

    async def save_report(self, name: str, report: BaseModel) -> str:
        text = orjson.dumps(report.model_dump(mode="json"), option=JSON_OPTIONS).decode()
        return await self.save_text(name, text + "\n")

    async def load_report(self, name: str, model: type[ReportT]) -> ReportT:
        return model.model_validate(orjson.loads(await self.load_text(name)))

    async def save_trace(self, name: str, t: CompilationTrace) -> str:
        """Write `<name>.trace` plus the formula, every vtree and every step circuit."""
        cnf_name = f"{name}.cnf"

        def vtree_name(i: int) -> str:
            return f"{name}.vtree{i}"

        def step_name(i: int) -> str:
            return f"{name}.step{i}.nnf"

        await self.save_cnf(cnf_name, t.formula)
        for i, vtree in enumerate(t.vtrees):
            await self.save_vtree(vtree_name(i), vtree)
        for i, step in enumerate(t.steps):
            await self.save_circuit(step_name(i), step.circuit, vtree_name(step.vtree_id))
        where = await self.save_text(
            f"{name}.trace", trace_format.dumps(t, cnf_name, vtree_name, step_name)
        )
        logger.debug("trace_saved", name=name, steps=len(t), vtrees=len(t.vtrees))
        return where

    async def load_trace(self, name: str, pool: ManagerPool) -> CompilationTrace:
        """Load `<name>.trace` (or `name` itself when it already ends in .trace)."""
        trace_name = name if name.endswith(".trace") else f"{name}.trace"
        tf = trace_format.parse(await self.load_text(trace_name))
        formula = await self.load_cnf(tf.cnf_path)
        vtrees = {i: await self.load_vtree(path) for i, path in tf.vtree_paths.items()}
        by_path = {path: vtrees[i] for i, path in tf.vtree_paths.items()}
        circuits: list[StrDnnf] = []
        for record in tf.records:
            text = await self.load_text(record.path)
            if record.vtree_id is not None:
                vtree = vtrees[record.vtree_id]
            else:
                ref = nnf_format.vtree_reference(text)
                if ref is None or ref not in by_path:
                    raise FormatError("trace", f"step {record.index} names an unknown vtree {ref}")
                vtree = by_path[ref]
            circuits.append(nnf_format.loads(text, pool.get(vtree)))
        t = trace_format.assemble(tf, formula, vtrees, circuits)
        logger.debug("trace_loaded", name=trace_name, steps=len(t))
        return t
