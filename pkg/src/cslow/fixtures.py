"""Small reference circuits used throughout the test suite and docs."""

from .netlist import Memory, Netlist


def toggle():
    """1-bit toggler: q inverts every cycle."""
    n = Netlist()
    n.add_register("q", "nq", init=0)
    n.add_gate("NOT", "nq", "q")
    n.add_output("q")
    return n


def cnt2():
    """2-bit binary counter."""
    n = Netlist()
    n.add_register("c0", "n0", init=0)
    n.add_register("c1", "n1", init=0)
    n.add_gate("NOT", "n0", "c0")
    n.add_gate("XOR2", "n1", "c1", "c0")
    n.add_output("c0")
    n.add_output("c1")
    return n


def acc4():
    """4-bit accumulator, ripple carry, combinational depth 4.

    Adds input a3..a0 into q3..q0 every cycle (mod 16). 12 gates: four
    half-sum XORs, three carry AND/MUX stages, three sum XORs.
    """
    n = Netlist()
    for i in range(4):
        n.add_input(f"a{i}")
    for i in range(4):
        n.add_gate("XOR2", f"p{i}", f"q{i}", f"a{i}")  # half sums
    n.add_gate("AND2", "c1", "q0", "a0")
    n.add_gate("AND2", "g1", "q1", "a1")
    n.add_gate("MUX2", "c2", "p1", "c1", "g1")  # carry: propagate or generate
    n.add_gate("AND2", "g2", "q2", "a2")
    n.add_gate("MUX2", "c3", "p2", "c2", "g2")
    n.add_gate("XOR2", "s1", "p1", "c1")
    n.add_gate("XOR2", "s2", "p2", "c2")
    n.add_gate("XOR2", "s3", "p3", "c3")
    n.add_register("q0", "p0", init=0)
    for i in (1, 2, 3):
        n.add_register(f"q{i}", f"s{i}", init=0)
    for i in range(4):
        n.add_output(f"q{i}")
    return n


def memloop():
    """Depth-4 register file in a read-modify-write loop.

    An address counter walks the memory; each cycle the word read in the
    previous cycle is incremented and written back to the address it came
    from, gated by the ``en`` input.
    """
    n = Netlist()
    n.add_input("en")
    # address counter and its one-cycle-delayed copy (write-back address)
    n.add_register("ad0", "an0", init=0)
    n.add_register("ad1", "an1", init=0)
    n.add_gate("NOT", "an0", "ad0")
    n.add_gate("XOR2", "an1", "ad1", "ad0")
    n.add_register("wa0", "ad0", init=0)
    n.add_register("wa1", "ad1", init=0)
    # increment the word read last cycle
    n.add_gate("NOT", "i0", "r0")
    n.add_gate("XOR2", "i1", "r1", "r0")
    n.add_memory(
        Memory(
            "rf",
            depth=4,
            width=2,
            raddr=("ad0", "ad1"),
            rdata=("r0", "r1"),
            waddr=("wa0", "wa1"),
            wdata=("i0", "i1"),
            wen="en",
        )
    )
    n.add_output("r0")
    n.add_output("r1")
    return n


FIXTURES = {
    "toggle": toggle,
    "cnt2": cnt2,
    "acc4": acc4,
    "memloop": memloop,
}
