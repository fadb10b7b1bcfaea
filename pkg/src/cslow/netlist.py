"""Gate-level netlist representation: parsing, validation, levelization.

Nets are single-bit and referred to by name. Multi-bit buses are a naming
convention (``a0, a1, ...``). There is one implicit clock; registers update
on its positive edge and memory reads are registered (the word addressed in
cycle ``k`` appears on ``rdata`` in cycle ``k+1``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

GATE_ARITY = {
    "NOT": 1,
    "BUF": 1,
    "AND2": 2,
    "OR2": 2,
    "XOR2": 2,
    "NAND2": 2,
    "NOR2": 2,
    "XNOR2": 2,
    "MUX2": 3,  # inputs: select, then-value, else-value
    "CONST0": 0,
    "CONST1": 0,
}

# Gates that do not contribute to unit-delay path length.
ZERO_DELAY_KINDS = {"BUF", "CONST0", "CONST1"}
CONST_KINDS = {"CONST0", "CONST1"}


class NetlistError(Exception):
    """Structural problem in a netlist."""


class ParseError(NetlistError):
    """Syntax or reference error in netlist source text."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Gate:
    """Combinational gate. Its identity is its output net name."""

    kind: str
    output: str
    inputs: tuple

    @property
    def id(self):
        return self.output

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise NetlistError(f"gate {self.output}: unknown kind {self.kind}")
        if len(self.inputs) != GATE_ARITY[self.kind]:
            raise NetlistError(
                f"gate {self.output}: {self.kind} takes {GATE_ARITY[self.kind]} "
                f"inputs, got {len(self.inputs)}"
            )


@dataclass(frozen=True)
class Register:
    """Positive-edge register. Its identity is its Q net name."""

    q: str
    d: str
    init: int = 0
    enable: str = None  # active-high; None = always enabled

    @property
    def id(self):
        return self.q

    def __post_init__(self):
        if self.init not in (0, 1):
            raise NetlistError(f"reg {self.q}: init must be 0 or 1")


@dataclass(frozen=True)
class Memory:
    """Synchronous memory with registered read port.

    ``depth`` must be a power of two. Net lists are LSB-first. A read and a
    write to the same address in the same cycle return the old word
    (read-before-write).
    """

    id: str
    depth: int
    width: int
    raddr: tuple
    rdata: tuple
    waddr: tuple
    wdata: tuple
    wen: str
    init: tuple = ()  # words, LSB-first bit significance; missing words are 0

    def __post_init__(self):
        if self.depth < 1 or self.depth & (self.depth - 1):
            raise NetlistError(f"mem {self.id}: depth must be a power of two")
        abits = clog2(self.depth)
        for name, nets in (("raddr", self.raddr), ("waddr", self.waddr)):
            if len(nets) != abits:
                raise NetlistError(
                    f"mem {self.id}: {name} needs {abits} nets, got {len(nets)}"
                )
        for name, nets in (("rdata", self.rdata), ("wdata", self.wdata)):
            if len(nets) != self.width:
                raise NetlistError(
                    f"mem {self.id}: {name} needs {self.width} nets, got {len(nets)}"
                )
        if len(self.init) > self.depth:
            raise NetlistError(f"mem {self.id}: too many init words")


@dataclass(frozen=True)
class Port:
    name: str
    direction: str  # "input" | "output"
    net: str


def clog2(n):
    """Smallest b with 2**b >= n."""
    b = 0
    while (1 << b) < n:
        b += 1
    return b


class Netlist:
    """Container for gates, registers, memories, ports and metadata.

    Construction is single-owner; once built and validated a netlist is
    treated as immutable and may be shared freely between readers.
    """

    def __init__(self):
        self.gates = {}  # output net -> Gate
        self.registers = {}  # q net -> Register
        self.memories = {}  # id -> Memory
        self.ports = []  # Port list, insertion order
        self.meta = []  # (key, (values...)) pairs, opaque to validation

    # -- construction ----------------------------------------------------

    def add_input(self, net):
        self.ports.append(Port(net, "input", net))
        return net

    def add_output(self, net, name=None):
        self.ports.append(Port(name or net, "output", net))
        return net

    def add_gate(self, kind, output, *inputs):
        if output in self.gates:
            raise NetlistError(f"duplicate gate output {output}")
        self.gates[output] = Gate(kind, output, tuple(inputs))
        return output

    def add_register(self, q, d, init=0, enable=None):
        if q in self.registers:
            raise NetlistError(f"duplicate register {q}")
        self.registers[q] = Register(q, d, init, enable)
        return q

    def add_memory(self, mem):
        if mem.id in self.memories:
            raise NetlistError(f"duplicate memory {mem.id}")
        self.memories[mem.id] = mem
        return mem.id

    def add_meta(self, key, *values):
        self.meta.append((key, tuple(str(v) for v in values)))

    # -- queries ----------------------------------------------------------

    def inputs(self):
        return [p for p in self.ports if p.direction == "input"]

    def outputs(self):
        return [p for p in self.ports if p.direction == "output"]

    def meta_get(self, key):
        """All value tuples recorded under ``key``."""
        return [v for k, v in self.meta if k == key]

    def drivers(self):
        """Map net -> list of driver descriptions (kind, element id)."""
        drv = {}

        def add(net, kind, elem):
            drv.setdefault(net, []).append((kind, elem))

        for p in self.ports:
            if p.direction == "input":
                add(p.net, "input", p.name)
        for g in self.gates.values():
            add(g.output, "gate", g.id)
        for r in self.registers.values():
            add(r.q, "reg", r.id)
        for m in self.memories.values():
            for b in m.rdata:
                add(b, "mem", m.id)
        return drv

    def nets(self):
        """Every net name mentioned anywhere in the netlist."""
        seen = set()
        for p in self.ports:
            seen.add(p.net)
        for g in self.gates.values():
            seen.add(g.output)
            seen.update(g.inputs)
        for r in self.registers.values():
            seen.add(r.q)
            seen.add(r.d)
            if r.enable:
                seen.add(r.enable)
        for m in self.memories.values():
            for group in (m.raddr, m.rdata, m.waddr, m.wdata):
                seen.update(group)
            seen.add(m.wen)
        return seen

    def consumed_nets(self):
        """Nets that something reads (gate inputs, reg D/EN, mem pins, outputs)."""
        used = set()
        for g in self.gates.values():
            used.update(g.inputs)
        for r in self.registers.values():
            used.add(r.d)
            if r.enable:
                used.add(r.enable)
        for m in self.memories.values():
            used.update(m.raddr)
            used.update(m.waddr)
            used.update(m.wdata)
            used.add(m.wen)
        for p in self.ports:
            if p.direction == "output":
                used.add(p.net)
        return used

    def copy(self):
        n = Netlist()
        n.gates = dict(self.gates)
        n.registers = dict(self.registers)
        n.memories = dict(self.memories)
        n.ports = list(self.ports)
        n.meta = list(self.meta)
        return n

    def __eq__(self, other):
        if not isinstance(other, Netlist):
            return NotImplemented
        return (
            self.gates == other.gates
            and self.registers == other.registers
            and self.memories == other.memories
            and sorted(self.ports, key=lambda p: (p.direction, p.name))
            == sorted(other.ports, key=lambda p: (p.direction, p.name))
            and sorted(self.meta) == sorted(other.meta)
        )

    def __repr__(self):
        return (
            f"<Netlist {len(self.gates)} gates, {len(self.registers)} regs, "
            f"{len(self.memories)} mems, {len(self.ports)} ports>"
        )


# -- validation -----------------------------------------------------------


def validate(n):
    """Check all structural invariants. Returns a list of diagnostics.

    An empty list means the netlist is well formed. Each diagnostic is a
    string naming the offending element or net.
    """
    diags = []
    drv = n.drivers()

    for net, who in drv.items():
        if len(who) > 1:
            names = ", ".join(f"{k} {e}" for k, e in who)
            diags.append(f"net {net}: multiple drivers ({names})")

    for net in sorted(n.consumed_nets()):
        if net not in drv:
            diags.append(f"net {net}: undefined (no driver and not an input)")

    seen_ports = set()
    for p in n.ports:
        if (p.direction, p.name) in seen_ports:
            diags.append(f"port {p.name}: duplicate {p.direction} port")
        seen_ports.add((p.direction, p.name))
        if p.direction == "input":
            others = [(k, e) for k, e in drv.get(p.net, []) if k != "input"]
            if others:
                diags.append(f"input {p.name}: net also driven by {others[0][1]}")

    # Combinational cycles: edges gate -> gate through directly-wired nets.
    gate_of = {g.output: g for g in n.gates.values()}
    state = {}  # 0 visiting, 1 done

    def visit(gid, stack):
        if state.get(gid) == 1:
            return None
        if state.get(gid) == 0:
            return stack[stack.index(gid):]
        state[gid] = 0
        stack.append(gid)
        for src in gate_of[gid].inputs:
            if src in gate_of:
                cyc = visit(src, stack)
                if cyc:
                    return cyc
        stack.pop()
        state[gid] = 1
        return None

    for gid in n.gates:
        cyc = visit(gid, [])
        if cyc:
            diags.append(
                "combinational cycle through gates: " + " -> ".join(sorted(cyc))
            )
            break

    return diags


def check_valid(n):
    """Raise NetlistError if validate() reports anything."""
    diags = validate(n)
    if diags:
        raise NetlistError("; ".join(diags))
    return n


# -- levelization -----------------------------------------------------------


def levelize(n):
    """Topologically order the gates and compute unit-delay depths.

    Returns ``(order, depth, per_gate)`` where ``order`` is a list of gate
    ids in evaluation order, ``depth`` is the longest source-to-sink path
    (CONST/BUF weigh 0, everything else 1) and ``per_gate`` maps each gate
    to the longest path ending at its output.
    """
    gate_of = n.gates
    indeg = {}
    fanout = {}
    for g in gate_of.values():
        indeg.setdefault(g.id, 0)
        for src in g.inputs:
            if src in gate_of:
                indeg[g.id] = indeg.get(g.id, 0) + 1
                fanout.setdefault(src, []).append(g.id)

    ready = [gid for gid in gate_of if indeg[gid] == 0]
    order = []
    per_gate = {}
    while ready:
        gid = ready.pop(0)
        order.append(gid)
        g = gate_of[gid]
        w = 0 if g.kind in ZERO_DELAY_KINDS else 1
        best = 0
        for src in g.inputs:
            if src in gate_of:
                best = max(best, per_gate[src])
        per_gate[gid] = best + w
        for succ in fanout.get(gid, ()):
            indeg[succ] -= 1
            if indeg[succ] == 0:
                ready.append(succ)

    if len(order) != len(gate_of):
        raise NetlistError("combinational cycle: levelize cannot order gates")

    depth = max(per_gate.values(), default=0)
    return order, depth, per_gate


def stats(n):
    """(register count, gate count, memory bit count, combinational depth)."""
    _, depth, _ = levelize(n)
    membits = sum(m.depth * m.width for m in n.memories.values())
    return (len(n.registers), len(n.gates), membits, depth)


# -- text format --------------------------------------------------------------


def parse_netlist(text):
    """Parse the line-oriented netlist format and validate the result.

    Statements, one per line (``#`` starts a comment)::

        input <net>
        output <net>
        gate <KIND> <out> <in...>
        reg <q> <d> init <0|1> [en <net>]
        mem <id> depth <D> width <W> raddr <n...> rdata <n...>
            waddr <n...> wdata <n...> wen <net> [init <words...>]
        meta <key> <values...>
    """
    n = Netlist()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        try:
            if kind == "input":
                _expect(len(tok) == 2, "input takes one net")
                n.add_input(tok[1])
            elif kind == "output":
                _expect(len(tok) == 2, "output takes one net")
                n.add_output(tok[1])
            elif kind == "gate":
                _expect(len(tok) >= 3, "gate needs a kind and an output")
                n.add_gate(tok[1], tok[2], *tok[3:])
            elif kind == "reg":
                _parse_reg(n, tok)
            elif kind == "mem":
                _parse_mem(n, tok)
            elif kind == "meta":
                _expect(len(tok) >= 2, "meta needs a key")
                n.add_meta(tok[1], *tok[2:])
            else:
                raise ParseError(f"unknown statement '{kind}'")
        except ParseError as e:
            if e.line is None:
                raise ParseError(str(e), lineno) from None
            raise
        except NetlistError as e:
            raise ParseError(str(e), lineno) from None

    diags = validate(n)
    if diags:
        raise NetlistError("; ".join(diags))
    return n


def _expect(cond, msg):
    if not cond:
        raise ParseError(msg)


def _parse_reg(n, tok):
    # reg <q> <d> init <0|1> [en <net>]
    _expect(len(tok) in (5, 7), "reg syntax: reg <q> <d> init <0|1> [en <net>]")
    _expect(tok[3] == "init", "reg: expected 'init'")
    _expect(tok[4] in ("0", "1"), "reg: init must be 0 or 1")
    enable = None
    if len(tok) == 7:
        _expect(tok[5] == "en", "reg: expected 'en'")
        enable = tok[6]
    n.add_register(tok[1], tok[2], int(tok[4]), enable)


def _parse_mem(n, tok):
    _expect(len(tok) >= 6, "mem: truncated statement")
    mid = tok[1]
    _expect(tok[2] == "depth", "mem: expected 'depth'")
    _expect(tok[4] == "width", "mem: expected 'width'")
    try:
        depth, width = int(tok[3]), int(tok[5])
    except ValueError:
        raise ParseError("mem: depth/width must be integers") from None
    sections = {}
    key = None
    for t in tok[6:]:
        if t in ("raddr", "rdata", "waddr", "wdata", "wen", "init"):
            key = t
            sections[key] = []
        else:
            _expect(key is not None, f"mem: unexpected token {t}")
            sections[key].append(t)
    for need in ("raddr", "rdata", "waddr", "wdata", "wen"):
        _expect(need in sections, f"mem: missing '{need}' section")
    _expect(len(sections["wen"]) == 1, "mem: wen takes one net")
    try:
        init = tuple(int(w) for w in sections.get("init", ()))
    except ValueError:
        raise ParseError("mem: init words must be integers") from None
    n.add_memory(
        Memory(
            mid,
            depth,
            width,
            tuple(sections["raddr"]),
            tuple(sections["rdata"]),
            tuple(sections["waddr"]),
            tuple(sections["wdata"]),
            sections["wen"][0],
            init,
        )
    )


def serialize_netlist(n):
    """Render a netlist in the text format; parses back structurally equal."""
    out = []
    for p in n.ports:
        if p.direction == "input":
            out.append(f"input {p.net}")
    for p in n.ports:
        if p.direction == "output":
            out.append(f"output {p.net}")
    for g in n.gates.values():
        ins = " ".join(g.inputs)
        out.append(f"gate {g.kind} {g.output} {ins}".rstrip())
    for r in n.registers.values():
        line = f"reg {r.q} {r.d} init {r.init}"
        if r.enable:
            line += f" en {r.enable}"
        out.append(line)
    for m in n.memories.values():
        line = (
            f"mem {m.id} depth {m.depth} width {m.width}"
            f" raddr {' '.join(m.raddr)} rdata {' '.join(m.rdata)}"
            f" waddr {' '.join(m.waddr)} wdata {' '.join(m.wdata)}"
            f" wen {m.wen}"
        )
        if any(m.init):
            line += f" init {' '.join(str(w) for w in m.init)}"
        out.append(line)
    for key, values in n.meta:
        out.append(f"meta {key} {' '.join(values)}".rstrip())
    return "\n".join(out) + ("\n" if out else "")
