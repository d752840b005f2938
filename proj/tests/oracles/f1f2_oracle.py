"""Frozen oracle values for the f1/f2 assembly test.

f1 comes from the physical Laplacian of the manufactured psi pushed through the
flattening map by the chain rule: f1 = psi_XX + psi_YY - J^3 lap_x(psi).
f2 comes from the physical velocity at the surface.  Neither route uses the
f1/f2 polynomials the library implements.

Run: python3 tests/oracles/f1f2_oracle.py > tests/oracles/f1f2_values.inc
"""
import sympy as sp

X, Y = sp.symbols("X Y", real=True)
L = 16 * sp.pi
N = 1024
h = 2 * L / N
ny = 32

eta = sp.Rational(1, 5) * sp.exp(-X**2)
a = (1 - Y**2) ** 3
psi = sp.Rational(1, 10) * sp.exp(Y) * sp.cos(X) + sp.Rational(1, 20) * (1 + Y) ** 2 * sp.sin(2 * X)

J = 1 + eta * sp.diff(a, Y)


def dx1(f):
    return sp.diff(f, X) - sp.diff(eta, X) * a / J * sp.diff(f, Y)


def dx2(f):
    return sp.diff(f, Y) / J


lap_x = dx1(dx1(psi)) + dx2(dx2(psi))
f1 = sp.diff(psi, X, 2) + sp.diff(psi, Y, 2) - J**3 * lap_x

# point vortex of strength w at xi with phantom at xs
w = sp.Rational(3, 10)
xi = (0, -1)
xs = (0, 1)
x1, x2 = X, Y + eta * a


def vortex_velocity(cx, cy, s):
    d1, d2 = x1 - cx, x2 - cy
    r2 = d1**2 + d2**2
    return (-s * d2 / (2 * sp.pi * r2), s * d1 / (2 * sp.pi * r2))


va = vortex_velocity(*xi, w)
vb = vortex_velocity(*xs, -w)
V1, V2 = va[0] + vb[0], va[1] + vb[1]
u1 = V1 - dx2(psi)
u2 = V2 + dx1(psi)
sigma = sp.Rational(7, 10)
eX = sp.diff(eta, X)
f2 = -(u1**2 + u2**2) / 2 + sigma * ((1 + eX**2) ** sp.Rational(-3, 2) - 1) * sp.diff(eta, X, 2)

cols = [N // 2, N // 2 + 7, N // 2 - 23, N // 2 + 3]
rows = [5, 16, 27, 1]

print("// generated by tests/oracles/f1f2_oracle.py")
print("// {j, i, f1} with X = -L + j h, Y = (cos(pi i / 32) - 1) / 2")
print("static const double kF1Oracle[][3] = {")
for j in cols:
    for i in rows:
        Xv = -L + j * h
        Yv = (sp.cos(sp.pi * i / ny) - 1) / 2
        v = sp.N(f1.subs({X: Xv, Y: Yv}), 30)
        print(f"    {{{j}, {i}, {sp.N(v, 20)}}},")
print("};")
print("// {j, f2} on Y = 0, sigma = 0.7, vortex 0.3 at (0,-1), phantom (0,1)")
print("static const double kF2Oracle[][2] = {")
for j in cols:
    Xv = -L + j * h
    v = sp.N(f2.subs({X: Xv, Y: 0}), 30)
    print(f"    {{{j}, {sp.N(v, 20)}}},")
print("};")
