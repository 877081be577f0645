"""NNF text format for structured circuits.

::

    c vtree <path>            (optional side-channel comment)
    nnf <nodes> <edges> <numvars>
    C <0|1> <lambda-id>
    L <signed-literal>
    A <left> <right> <lambda-id>
    O <left> <right> <lambda-id>

Node lines are numbered from 0 in order of appearance and children refer to
earlier lines. Literal nodes take their vtree node from the variable's leaf.
The root is the last line.
"""
import structlog

from sdnnf_lab.circuits.manager import DnnfManager, NodeKind
from sdnnf_lab.circuits.strdnnf import StrDnnf
from sdnnf_lab.errors import FormatError

logger = structlog.get_logger(__name__)


def dumps(s: StrDnnf, vtree_path: str | None = None) -> str:
    m = s.manager
    order = m.postorder(s.root)
    index = {n: i for i, n in enumerate(order)}
    lines = [] if vtree_path is None else [f"c vtree {vtree_path}"]
    lines.append(f"nnf {len(order)} {s.size} {len(s.vtree.variables)}")
    for n in order:
        match m.kind(n):
            case NodeKind.CONST:
                lines.append(f"C {m.value_of(n)} {m.lam(n)}")
            case NodeKind.LIT:
                lines.append(f"L {m.literal_of(n)}")
            case kind:
                a, b = m.children(n)
                tag = "A" if kind == NodeKind.AND else "O"
                lines.append(f"{tag} {index[a]} {index[b]} {m.lam(n)}")
    return "\n".join(lines) + "\n"


def vtree_reference(text: str) -> str | None:
    """The path named by a `c vtree <path>` comment, if present."""
    for line in text.splitlines():
        parts = line.split(maxsplit=2)
        if len(parts) == 3 and parts[0] == "c" and parts[1] == "vtree":
            return parts[2].strip()
    return None


def loads(text: str, manager: DnnfManager) -> StrDnnf:
    """Rebuild a circuit node by node, exactly as written.

    No simplification is applied, so malformed circuits load and can be
    reported by `validate`.
    """
    vt = manager.vtree
    header: tuple[int, int, int] | None = None
    ids: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        try:
            if header is None:
                if parts[0] != "nnf" or len(parts) != 4:
                    raise FormatError("nnf", "missing 'nnf <nodes> <edges> <numvars>' header", lineno)
                header = (int(parts[1]), int(parts[2]), int(parts[3]))
                continue
            ids.append(_node(manager, parts, ids, lineno))
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError("nnf", str(exc), lineno) from exc
    if header is None:
        raise FormatError("nnf", "missing header")
    if not ids:
        raise FormatError("nnf", "circuit has no nodes")
    if len(ids) != header[0]:
        raise FormatError("nnf", f"header announces {header[0]} nodes, found {len(ids)}")
    if header[2] != len(vt.variables):
        raise FormatError("nnf", f"header announces {header[2]} variables, vtree has {len(vt.variables)}")
    circuit = StrDnnf(manager, ids[-1])
    if circuit.size != header[1]:
        raise FormatError("nnf", f"header announces {header[1]} edges, found {circuit.size}")
    logger.debug("nnf_loaded", nodes=header[0], edges=header[1])
    return circuit


def _node(manager: DnnfManager, parts: list[str], ids: list[int], lineno: int) -> int:
    vt = manager.vtree
    tag = parts[0]
    if tag == "L" and len(parts) == 2:
        lit = int(parts[1])
        if lit == 0 or abs(lit) not in vt.leaves:
            raise FormatError("nnf", f"literal {lit} is not over a vtree variable", lineno)
        return manager.literal(lit)
    if tag == "C" and len(parts) == 3:
        value, lam = int(parts[1]), int(parts[2])
        if value not in (0, 1):
            raise FormatError("nnf", f"constant {value} is not 0 or 1", lineno)
        _check_lambda(vt.node_count, lam, lineno)
        return manager.const(value, lam)
    if tag in ("A", "O") and len(parts) == 4:
        a, b, lam = int(parts[1]), int(parts[2]), int(parts[3])
        for child in (a, b):
            if not 0 <= child < len(ids):
                raise FormatError("nnf", f"child {child} does not precede node {len(ids)}", lineno)
        _check_lambda(vt.node_count, lam, lineno)
        return manager.raw(NodeKind.AND if tag == "A" else NodeKind.OR, ids[a], ids[b], lam)
    raise FormatError("nnf", f"bad node line {' '.join(parts)!r}", lineno)


def _check_lambda(count: int, lam: int, lineno: int) -> None:
    if not 0 <= lam < count:
        raise FormatError("nnf", f"vtree node {lam} does not exist", lineno)
