"""Scenario files: versioned JSON describing one verification workflow.

Complex numbers appear as [re, im] pairs; vectors are lists of pairs, and
matrices lists of rows of pairs.  Measurement bases may instead be named
("Z", "X", "Y").  See the README for the per-kind field reference.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .icqc import GateOp, IcqcConfig, tomographic_program_n1
from .linalg import Operator, StateVector, seeded_random
from .serialize import pairs_to_complex
from .suite import subseed
from .trinary import TrinaryDims, TrinaryState, standard_basis
from .dynamics import ProgrammedBlockStructure, TrinaryHamiltonian, random_trinary_hamiltonian

SCHEMA_VERSION = 1
KINDS = ("trinary-build", "dynamics", "born", "icqc", "property-suite")


class ScenarioError(ValueError):
    """Scenario file is missing, malformed, or inconsistent."""


@dataclass(frozen=True)
class Scenario:
    kind: str
    seed: int
    payload: dict


def load_scenario(path: str | Path, seed_override: int | None = None) -> Scenario:
    p = Path(path)
    if not p.is_file():
        raise ScenarioError(f"scenario file not found: {p}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON in {p}: {exc}") from exc
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    if data.get("schema") != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported schema {data.get('schema')!r}, expected {SCHEMA_VERSION}")
    kind = data.get("kind")
    if kind not in KINDS:
        raise ScenarioError(f"kind must be one of {KINDS}, got {kind!r}")
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0 or seed >= 2**64:
        raise ScenarioError("seed must be an unsigned 64-bit integer")
    if seed_override is not None:
        seed = seed_override
    return Scenario(kind=kind, seed=seed, payload=data)


def parse_dims(payload: dict) -> TrinaryDims:
    dims = payload.get("dims")
    if (
        not isinstance(dims, list)
        or len(dims) != 3
        or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in dims)
    ):
        raise ScenarioError("dims must be a list [d_s, d_a, d_p] of positive integers")
    return TrinaryDims(d_s=dims[0], d_a=dims[1], d_p=dims[2])


def parse_matrix(obj, dim: int, what: str) -> np.ndarray:
    try:
        m = pairs_to_complex(obj)
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"{what}: {exc}") from exc
    if m.shape != (dim, dim):
        raise ScenarioError(f"{what} must be {dim}x{dim}, got shape {m.shape}")
    return m


def parse_vector(obj, dim: int, what: str) -> StateVector:
    if obj == "uniform":
        return StateVector.uniform(dim)
    if isinstance(obj, str) and obj.startswith("basis"):
        try:
            index = int(obj[len("basis"):])
        except ValueError:
            raise ScenarioError(f"{what}: bad basis name {obj!r}") from None
        if not 0 <= index < dim:
            raise ScenarioError(f"{what}: basis index {index} out of range")
        return StateVector.basis(dim, index)
    try:
        v = pairs_to_complex(obj)
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"{what}: {exc}") from exc
    if v.shape != (dim,):
        raise ScenarioError(f"{what} must have length {dim}")
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ScenarioError(f"{what} is the zero vector")
    return StateVector(v / nrm)


def parse_basis(obj, dim: int, what: str) -> tuple[np.ndarray, str | None]:
    """A named basis (Z/X/Y) or an explicit matrix of basis columns."""
    if isinstance(obj, str):
        try:
            return standard_basis(obj, dim), obj
        except ValueError as exc:
            raise ScenarioError(f"{what}: {exc}") from exc
    return parse_matrix(obj, dim, what), None


def parse_branch_bases(payload: dict, dims: TrinaryDims) -> tuple[list[np.ndarray], list[str | None]]:
    raw = payload.get("branch_bases")
    if not isinstance(raw, list) or len(raw) != dims.d_p:
        raise ScenarioError(f"branch_bases must list {dims.d_p} bases (one per programming state)")
    bases, labels = [], []
    for r, obj in enumerate(raw):
        basis, label = parse_basis(obj, dims.d_s, f"branch_bases[{r}]")
        bases.append(basis)
        labels.append(label)
    return bases, labels


def _parse_block(obj, dims: TrinaryDims, what: str) -> tuple[Operator, ProgrammedBlockStructure | None]:
    """A block is a raw d_sa x d_sa matrix or a structured second-level dict."""
    if isinstance(obj, dict):
        for key in ("s_basis", "a_generators", "h_s"):
            if key not in obj:
                raise ScenarioError(f"{what}: structured block needs '{key}'")
        s_basis, _ = parse_basis(obj["s_basis"], dims.d_s, f"{what}.s_basis")
        gens = obj["a_generators"]
        if not isinstance(gens, list) or len(gens) != dims.d_s:
            raise ScenarioError(f"{what}.a_generators must list {dims.d_s} matrices")
        a_generators = tuple(
            Operator(parse_matrix(g, dims.d_a, f"{what}.a_generators[{i}]"))
            for i, g in enumerate(gens)
        )
        h_s = Operator(parse_matrix(obj["h_s"], dims.d_s, f"{what}.h_s"))
        try:
            structure = ProgrammedBlockStructure(
                s_basis=s_basis, a_generators=a_generators, h_s=h_s
            )
        except ValueError as exc:
            raise ScenarioError(f"{what}: {exc}") from exc
        return structure.assemble(), structure
    return Operator(parse_matrix(obj, dims.d_sa, what)), None


def parse_hamiltonian(
    obj, dims: TrinaryDims, seed: int
) -> tuple[TrinaryHamiltonian, list[ProgrammedBlockStructure | None]]:
    if not isinstance(obj, dict):
        raise ScenarioError("hamiltonian must be an object")
    if "random" in obj:
        kind = obj["random"]
        if kind not in ("pmc", "coupled", "violating"):
            raise ScenarioError(f"hamiltonian.random must be pmc/coupled/violating, got {kind!r}")
        return random_trinary_hamiltonian(dims, subseed(seed, 7), kind=kind), [None] * dims.d_p
    for key in ("h_p", "blocks"):
        if key not in obj:
            raise ScenarioError(f"hamiltonian needs '{key}' (or 'random')")
    h_p = Operator(parse_matrix(obj["h_p"], dims.d_p, "hamiltonian.h_p"))
    raw_blocks = obj["blocks"]
    if not isinstance(raw_blocks, list) or len(raw_blocks) != dims.d_p:
        raise ScenarioError(f"hamiltonian.blocks must list {dims.d_p} blocks")
    blocks, structures = [], []
    for n, raw in enumerate(raw_blocks):
        block, structure = _parse_block(raw, dims, f"hamiltonian.blocks[{n}]")
        blocks.append(block)
        structures.append(structure)
    basis = None
    if "programming_basis" in obj:
        basis = parse_matrix(obj["programming_basis"], dims.d_p, "hamiltonian.programming_basis")
    try:
        h = TrinaryHamiltonian(dims=dims, h_p=h_p, blocks=tuple(blocks), programming_basis=basis)
    except ValueError as exc:
        raise ScenarioError(f"hamiltonian: {exc}") from exc
    return h, structures


def parse_segments(
    payload: dict, dims: TrinaryDims, seed: int
) -> list[tuple[float, TrinaryHamiltonian, list[ProgrammedBlockStructure | None]]]:
    """Either one 'hamiltonian' (a single open-ended segment) or 'segments'."""
    if "segments" in payload and "hamiltonian" in payload:
        raise ScenarioError("give either 'hamiltonian' or 'segments', not both")
    if "hamiltonian" in payload:
        h, structures = parse_hamiltonian(payload["hamiltonian"], dims, seed)
        return [(np.inf, h, structures)]
    raw = payload.get("segments")
    if not isinstance(raw, list) or not raw:
        raise ScenarioError("need 'hamiltonian' or a nonempty 'segments' list")
    out = []
    for k, seg in enumerate(raw):
        if not isinstance(seg, dict) or "duration" not in seg or "hamiltonian" not in seg:
            raise ScenarioError(f"segments[{k}] needs 'duration' and 'hamiltonian'")
        duration = seg["duration"]
        if not isinstance(duration, (int, float)) or duration < 0:
            raise ScenarioError(f"segments[{k}].duration must be nonnegative")
        h, structures = parse_hamiltonian(seg["hamiltonian"], dims, subseed(seed, 8, k))
        out.append((float(duration), h, structures))
    return out


def parse_times(payload: dict) -> tuple[float, ...]:
    raw = payload.get("times")
    if not isinstance(raw, list) or not raw:
        raise ScenarioError("times must be a nonempty list")
    times = []
    for t in raw:
        if not isinstance(t, (int, float)) or isinstance(t, bool):
            raise ScenarioError("times must be numbers")
        times.append(float(t))
    if times[0] != 0.0 or any(b < a for a, b in zip(times, times[1:])):
        raise ScenarioError("times must ascend and start at 0")
    return tuple(times)


def parse_initial_state(payload: dict, dims: TrinaryDims, seed: int) -> TrinaryState:
    obj = payload.get("initial_state", {"random": "separable"})
    if not isinstance(obj, dict):
        raise ScenarioError("initial_state must be an object")
    if "random" in obj:
        kind = obj["random"]
        if kind == "separable":
            return TrinaryState.from_product(
                dims,
                seeded_random("state", dims.d_p, subseed(seed, 4)),
                seeded_random("state", dims.d_s, subseed(seed, 5)),
                seeded_random("state", dims.d_a, subseed(seed, 6)),
            )
        if kind == "generic":
            return TrinaryState.from_dense(
                dims, seeded_random("state", dims.total, subseed(seed, 4))
            )
        raise ScenarioError("initial_state.random must be 'separable' or 'generic'")
    if "product" in obj:
        prod = obj["product"]
        for key in ("chi", "system", "apparatus"):
            if key not in prod:
                raise ScenarioError(f"initial_state.product needs '{key}'")
        return TrinaryState.from_product(
            dims,
            parse_vector(prod["chi"], dims.d_p, "initial_state.product.chi"),
            parse_vector(prod["system"], dims.d_s, "initial_state.product.system"),
            parse_vector(prod["apparatus"], dims.d_a, "initial_state.product.apparatus"),
        )
    raise ScenarioError("initial_state needs 'random' or 'product'")


def parse_gate(obj, what: str) -> GateOp:
    if not isinstance(obj, dict) or "kind" not in obj or "targets" not in obj:
        raise ScenarioError(f"{what} must be an object with 'kind' and 'targets'")
    targets = obj["targets"]
    if not isinstance(targets, list) or not all(
        isinstance(t, list) and len(t) == 2 and isinstance(t[0], str) and isinstance(t[1], int)
        for t in targets
    ):
        raise ScenarioError(f"{what}.targets must be [register, qubit] pairs")
    angle = obj.get("angle")
    if angle is not None and not isinstance(angle, (int, float)):
        raise ScenarioError(f"{what}.angle must be a number")
    try:
        return GateOp(
            kind=obj["kind"],
            targets=tuple((t[0], t[1]) for t in targets),
            angle=None if angle is None else float(angle),
        )
    except ValueError as exc:
        raise ScenarioError(f"{what}: {exc}") from exc


def parse_gate_list(obj, what: str) -> tuple[GateOp, ...]:
    if obj is None:
        return ()
    if not isinstance(obj, list):
        raise ScenarioError(f"{what} must be a list of gates")
    return tuple(parse_gate(g, f"{what}[{i}]") for i, g in enumerate(obj))


def parse_icqc_config(payload: dict, seed: int) -> IcqcConfig:
    n = payload.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ScenarioError("n must be a positive integer")
    gates = parse_gate_list(payload.get("gates"), "gates")
    p_circuit = parse_gate_list(payload.get("p_circuit"), "p_circuit")
    initial = payload.get("initial", "uniform")
    program = payload.get("program")
    if program == "tomographic-zxyz":
        if n != 1:
            raise ScenarioError("the tomographic-zxyz program is defined for n = 1")
        table = tomographic_program_n1()
    elif isinstance(program, dict) and "random" in program:
        depth = program["random"].get("depth", 3) if isinstance(program["random"], dict) else 3
        if not isinstance(depth, int) or depth < 0:
            raise ScenarioError("program.random.depth must be a nonnegative integer")
        rng = np.random.default_rng(subseed(seed, 9))
        table = []
        for _ in range(4**n):
            circ = [
                GateOp(
                    "RY",
                    ((("S", "A")[int(rng.integers(2))], int(rng.integers(n))),),
                    angle=float(rng.uniform(0, np.pi)),
                )
                for _ in range(depth)
            ]
            circ.append(
                GateOp("CNOT", (("S", int(rng.integers(n))), ("A", int(rng.integers(n)))))
            )
            table.append(tuple(circ))
        table = tuple(table)
    elif isinstance(program, list):
        table = tuple(
            parse_gate_list(entry, f"program[{p}]") for p, entry in enumerate(program)
        )
    else:
        raise ScenarioError(
            "program must be 'tomographic-zxyz', {'random': {...}}, or a list of circuits"
        )
    try:
        return IcqcConfig(
            n=n,
            gate_sequence=gates,
            program_table=table,
            post_program_p_circuit=p_circuit,
            initial=initial,
            n_a=payload.get("n_a"),
            n_p=payload.get("n_p"),
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
