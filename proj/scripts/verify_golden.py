#!/usr/bin/env python3
"""Independent recomputation of the golden values frozen in the C++ tests.

Everything here is evaluated from first principles with plain Python floats,
no shared code with the simulator. Run it whenever a golden constant in
tests/ looks suspicious; the printed values must match the frozen ones to
the stated tolerances.
"""

import math

Q = 1.602176634e-19  # elementary charge, C
SINR_SCALE = math.e / (2.0 * math.pi)


def lambertian_order(phi_half):
    return -math.log(2.0) / math.log(math.cos(phi_half))


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def norm(v):
    return math.sqrt(sum(x * x for x in v))


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def unit(v):
    n = norm(v)
    return tuple(x / n for x in v)


def check(name, value, frozen, tol):
    ok = abs(value - frozen) <= tol
    print(f"{name:26s} {value!r:28} frozen {frozen!r:28} {'ok' if ok else 'MISMATCH'}")
    return ok


def main():
    all_ok = True

    # direction cosine used throughout the channel model
    c = 1.5 / math.sqrt(2.5**2 + 1.5**2)
    all_ok &= check("cos_angle", c, 0.5144957554275265, 1e-15)

    # Lambertian mode numbers
    all_ok &= check("order(30deg)", lambertian_order(math.radians(30.0)), 4.81884167930642, 1e-12)
    # cos(60 deg) is exactly 1/2, so the half-intensity identity gives order 1
    all_ok &= check("order(60deg)", -math.log(2.0) / math.log(0.5), 1.0, 0.0)

    # direct path, on-axis: AP (2.5,2.5,3) facing down, receiver (2.5,2.5,1)
    # facing up, area 20 mm^2, order 1. Both cosines are 1, distance 2 m.
    n = 1.0
    area = 20e-6
    d = 2.0
    h_los = (n + 1.0) * area / (2.0 * math.pi * d * d)
    all_ok &= check("los_gain", h_los, 1.5915494309189535e-06, 1e-10)

    # reflected path: AP (2.5,2.5,3) down, mirror (2.5,0,1.5) with dA = 0.025,
    # reflectivity 0.95, steered at the user; user (2.5,2,1) facing up.
    ap = (2.5, 2.5, 3.0)
    mc = (2.5, 0.0, 1.5)
    us = (2.5, 2.0, 1.0)
    d_am = sub(mc, ap)
    d_um = sub(mc, us)
    cos_irr = dot(d_am, (0.0, 0.0, -1.0)) / norm(d_am)
    cos_inc = dot(d_um, (0.0, 0.0, 1.0)) / norm(d_um)
    rho, da = 0.95, 0.025
    total = norm(d_am) + norm(d_um)
    h_irs = (n + 1.0) * rho * area * da * cos_irr * cos_inc / (2.0 * math.pi * total * total)
    print(f"{'  cos_irr':26s} {cos_irr!r}")
    print(f"{'  cos_inc':26s} {cos_inc!r}")
    print(f"{'  D_ml, D_km':26s} {norm(d_am)!r} {norm(d_um)!r}")
    all_ok &= check("irs_gain", h_irs, 7.616593393647571e-10, 1e-22)
    # nominal published rounding of the same quantity
    all_ok &= check("irs_gain (nominal)", h_irs, 7.615e-10, 2e-13)

    # steering sanity: the bisector normal reflects the AP ray onto the user
    to_ap = unit(sub(ap, mc))
    to_user = unit(sub(us, mc))
    nrm = unit(tuple(a + b for a, b in zip(to_ap, to_user)))
    inc = unit(sub(mc, ap))
    refl = tuple(i - 2.0 * dot(inc, nrm) * nr for i, nr in zip(inc, nrm))
    miss = norm(sub(refl, to_user))
    print(f"{'steer residual':26s} {miss!r} {'ok' if miss < 1e-12 else 'MISMATCH'}")
    all_ok &= miss < 1e-12

    # receiver noise variance: thermal-equivalent amplifier floor, ambient
    # shot term, and signal-dependent shot term
    amp, ibg, r0, pr, bw = 1e-22, 1e-4, 0.4, 1e-6, 2e7
    var = 2.0 * Q * ibg * bw + amp * bw + 2.0 * Q * r0 * pr * bw
    all_ok &= check("noise_variance", var, 2.6434341362144e-15, 1e-28)

    # single-user rate with the on-axis geometry above, P = 1 W
    p = 1.0
    sig = r0 * p * h_los
    var1 = 2.0 * Q * ibg * bw + amp * bw + 2.0 * Q * r0 * p * h_los * bw
    sinr = sig * sig / var1
    rate = bw * math.log2(1.0 + SINR_SCALE * sinr)
    all_ok &= check("single_user_sinr", sinr, 153.22960672867174, 1e-9)
    all_ok &= check("single_user_rate", rate, 121447011.80444081, 1e-4)

    # two-AP interference case: APs at x 1.25 / 3.75 (y 2.5, z 3), users
    # directly underneath at z 1, each served by its own AP, P = 5 W
    ap_x = (1.25, 3.75)
    p = 5.0
    h_own = h_los
    dx = 2.5
    dist2 = dx * dx + 4.0
    cosv = 2.0 / math.sqrt(dist2)
    h_cross = (n + 1.0) * area * cosv * cosv / (2.0 * math.pi * dist2)
    interf = r0 * p * h_cross
    var2 = 2.0 * Q * ibg * bw + amp * bw + 2.0 * Q * r0 * p * h_own * bw
    sinr2 = (r0 * p * h_own) ** 2 / (interf * interf + var2)
    rate2 = bw * math.log2(1.0 + SINR_SCALE * sinr2)
    all_ok &= check("cross_gain", h_cross, 2.423775456961643e-07, 1e-20)
    all_ok &= check("interfered_sinr", sinr2, 42.634844750425806, 1e-9)
    all_ok &= check("interfered_rate", rate2, 85626586.91923101, 1e-4)

    # sequential-assignment state id: user 2 next, per-AP loads (1,1,0,0),
    # five users -> radix 6
    state = 2 * 6**4 + 1 * 6**0 + 1 * 6**1
    all_ok &= check("encode_state", float(state), 2599.0, 0.0)

    # tabular update algebra
    ql = 0.0 + 0.5 * (2.0 + 0.9 * 1.0 - 0.0)
    sa = 1.0 + 0.1 * (0.5 + 0.9 * 2.0 - 1.0)
    all_ok &= check("q_learning_update", ql, 1.45, 0.0)
    all_ok &= check("sarsa_update", sa, 1.13, 0.0)

    print("ALL OK" if all_ok else "MISMATCHES FOUND")
    return 0 if all_ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
