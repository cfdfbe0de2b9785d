#!/usr/bin/env python3
"""Write the benchmark and micro-case QASM fixtures under crates/core/fixtures."""

import math
import os
import random

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "crates", "core", "fixtures")


class Qasm:
    def __init__(self, n, comment):
        self.n = n
        self.lines = [f"// {comment}", "OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{n}];"]

    def op(self, name, *qubits, params=None):
        args = ",".join(f"q[{q}]" for q in qubits)
        if params is None:
            self.lines.append(f"{name} {args};")
        else:
            ps = ",".join(f"{p:.12g}" for p in params)
            self.lines.append(f"{name}({ps}) {args};")

    def write(self, path):
        with open(path, "w") as f:
            f.write("\n".join(self.lines) + "\n")


def c3z_gray(c):
    """Controlled-controlled-controlled-Z on q0..q3 as a 14-CX phase polynomial."""
    def phase(size):
        return math.pi / 8 * (1 if size % 2 == 1 else -1)

    for top in (3, 2, 1, 0):
        lower = list(range(top))
        prev = 0
        for i in range(1 << len(lower)):
            g = i ^ (i >> 1)
            diff = g ^ prev
            if diff:
                c.op("cx", lower[diff.bit_length() - 1], top)
            c.op("rz", top, params=[phase(bin(g).count("1") + 1)])
            prev = g
        if prev:
            c.op("cx", lower[prev.bit_length() - 1], top)


def grover4():
    c = Qasm(4, "Grover search on 4 qubits, marked state |1011>, 3 iterations")
    marked = 0b1011
    for q in range(4):
        c.op("h", q)
    for _ in range(3):
        zeros = [q for q in range(4) if not marked >> q & 1]
        for q in zeros:
            c.op("x", q)
        c3z_gray(c)
        for q in zeros:
            c.op("x", q)
        for q in range(4):
            c.op("h", q)
            c.op("x", q)
        c3z_gray(c)
        for q in range(4):
            c.op("x", q)
            c.op("h", q)
    return c


def mcz_vchain(c, ctrls, target, anc):
    chain = [(ctrls[0], ctrls[1], anc[0])]
    for i, q in enumerate(ctrls[2:]):
        chain.append((anc[i], q, anc[i + 1]))
    for a, b, t in chain:
        c.op("ccx", a, b, t)
    c.op("cz", chain[-1][2], target)
    for a, b, t in reversed(chain):
        c.op("ccx", a, b, t)


def grover_vchain(search, iterations, marked):
    anc = list(range(search, 2 * search - 2))
    n = 2 * search - 2
    c = Qasm(n, f"Grover search on {search} qubits with {len(anc)} v-chain ancillas, marked {marked:0{search}b}")
    data = list(range(search))
    for q in data:
        c.op("h", q)
    for _ in range(iterations):
        zeros = [q for q in data if not marked >> q & 1]
        for q in zeros:
            c.op("x", q)
        mcz_vchain(c, data[:-1], data[-1], anc)
        for q in zeros:
            c.op("x", q)
        for q in data:
            c.op("h", q)
            c.op("x", q)
        mcz_vchain(c, data[:-1], data[-1], anc)
        for q in data:
            c.op("x", q)
            c.op("h", q)
    return c


def vqe(n, reps, seed):
    rng = random.Random(seed)
    c = Qasm(n, f"Hardware-efficient ansatz, {n} qubits, full entanglement, {reps} reps")

    def layer():
        for q in range(n):
            c.op("ry", q, params=[rng.uniform(-math.pi, math.pi)])
            c.op("rz", q, params=[rng.uniform(-math.pi, math.pi)])

    for _ in range(reps):
        layer()
        for i in range(n):
            for j in range(i + 1, n):
                c.op("cx", i, j)
    layer()
    return c


def bv(n):
    c = Qasm(n, f"Bernstein-Vazirani, {n - 1}-bit all-ones secret")
    anc = n - 1
    c.op("x", anc)
    for q in range(n):
        c.op("h", q)
    for q in range(n - 1):
        c.op("cx", q, anc)
    for q in range(n - 1):
        c.op("h", q)
    return c


def qft_ops(c, qubits, inverse=False):
    ops = []
    n = len(qubits)
    for i in reversed(range(n)):
        ops.append(("h", qubits[i], None))
        for j in reversed(range(i)):
            ops.append(("cu1", (qubits[j], qubits[i]), math.pi / 2 ** (i - j)))
    if inverse:
        ops = [(name, q, None if p is None else -p) for name, q, p in reversed(ops)]
    for name, q, p in ops:
        if name == "h":
            c.op("h", q)
        else:
            c.op("cu1", *q, params=[p])


def qft(n):
    c = Qasm(n, f"Quantum Fourier transform on {n} qubits, no output reversal")
    qft_ops(c, list(range(n)))
    return c


def qpe(counting, phase):
    n = counting + 1
    c = Qasm(n, f"Phase estimation with {counting} counting qubits, eigenphase {phase}")
    tgt = counting
    c.op("x", tgt)
    for q in range(counting):
        c.op("h", q)
    for q in range(counting):
        c.op("cu1", q, tgt, params=[2 * math.pi * phase * 2 ** (counting - 1 - q)])
    qft_ops(c, list(range(counting)), inverse=True)
    return c


def cuccaro(bits):
    # q0 = cin, then interleaved b_i, a_i, last = cout
    n = 2 * bits + 2
    c = Qasm(n, f"Cuccaro ripple-carry adder, {bits}-bit operands")
    cin, cout = 0, n - 1
    b = [1 + 2 * i for i in range(bits)]
    a = [2 + 2 * i for i in range(bits)]

    def maj(x, y, z):
        c.op("cx", z, y)
        c.op("cx", z, x)
        c.op("ccx", x, y, z)

    def uma(x, y, z):
        c.op("ccx", x, y, z)
        c.op("cx", z, x)
        c.op("cx", x, y)

    maj(cin, b[0], a[0])
    for i in range(1, bits):
        maj(a[i - 1], b[i], a[i])
    c.op("cx", a[-1], cout)
    for i in reversed(range(1, bits)):
        uma(a[i - 1], b[i], a[i])
    uma(cin, b[0], a[0])
    return c


def micro():
    f1 = Qasm(3, "Three controlled rotations on pairs (1,2), (0,1), (0,2)")
    f1.op("crx", 1, 2, params=[0.7])
    f1.op("crx", 0, 1, params=[1.3])
    f1.op("crx", 0, 2, params=[-0.4])
    f1.write(os.path.join(ROOT, "micro", "three_rotations.qasm"))


def main():
    bench = os.path.join(ROOT, "bench")
    os.makedirs(bench, exist_ok=True)
    os.makedirs(os.path.join(ROOT, "micro"), exist_ok=True)
    grover4().write(os.path.join(bench, "grover_4.qasm"))
    grover_vchain(4, 3, 0b0110).write(os.path.join(bench, "grover_6.qasm"))
    grover_vchain(5, 4, 0b10011).write(os.path.join(bench, "grover_8.qasm"))
    vqe(8, 3, 8).write(os.path.join(bench, "vqe_8.qasm"))
    vqe(12, 3, 12).write(os.path.join(bench, "vqe_12.qasm"))
    bv(19).write(os.path.join(bench, "bv_19.qasm"))
    qft(15).write(os.path.join(bench, "qft_15.qasm"))
    qft(20).write(os.path.join(bench, "qft_20.qasm"))
    qpe(8, 0.3125).write(os.path.join(bench, "qpe_9.qasm"))
    cuccaro(4).write(os.path.join(bench, "adder_10.qasm"))
    micro()


if __name__ == "__main__":
    main()
