#!/usr/bin/env python3
"""Independent recomputation of the constants frozen into the test suite.

Every capacity formula in src/estimators.cpp and src/random_sketch.cpp is
mirrored here operation-for-operation on IEEE doubles, so the C++ results can
be asserted against values derived outside the library. Run with no arguments;
prints one line per frozen constant.
"""

import math


def ceil_count(v: float) -> int:
    return int(math.ceil(v))


def square_capacity(theta: float, eps: float, delta: float, c_m: float = 1.0) -> int:
    return ceil_count(c_m * math.log(2.0 / delta) / (theta * eps * eps))


def squad_reservoir_capacity(theta: float, eps: float, delta: float, c_z: float = 1.0) -> int:
    return ceil_count(c_z * math.log(2.0 / delta) / (theta * math.pow(eps, 1.5)))


def quasi_entry_capacity(theta: float, eps: float) -> int:
    return ceil_count(2.0 / (eps * theta))


def squad_entry_capacity(theta: float, eps: float) -> int:
    return ceil_count(4.0 / (math.sqrt(eps) * theta))


def buffer_capacity(eps: float) -> int:
    inv = 1.0 / eps
    s = int(math.ceil(0.5 * inv * math.sqrt(1.0 + math.log2(inv))))
    s = max(2, s)
    if s % 2 != 0:
        s += 1
    return s


def convergence_threshold(theta: float, eps: float, delta: float, p: float, alpha: float) -> int:
    residual_eps = (1.0 - alpha) * eps
    residual_delta = (1.0 - alpha) * delta
    return ceil_count(
        math.log(2.0 / residual_delta) / (theta * residual_eps * residual_eps * p)
    )


def main() -> None:
    theta, delta = 0.01, 0.05
    for eps in (0.2, 0.1, 0.05, 0.025):
        print(f"square M(theta={theta}, eps={eps}, delta={delta}) = "
              f"{square_capacity(theta, eps, delta)}")
    for eps in (0.2, 0.1, 0.05, 0.025):
        print(f"squad z(theta={theta}, eps={eps}, delta={delta}) = "
              f"{squad_reservoir_capacity(theta, eps, delta)}")
    for eps in (0.1, 0.05, 0.025):
        print(f"quasi k(theta={theta}, eps={eps}) = {quasi_entry_capacity(theta, eps)}")
    for eps in (0.2, 0.1, 0.05, 0.025):
        print(f"squad m(theta={theta}, eps={eps}) = {squad_entry_capacity(theta, eps)}")
    for eps in (0.1, 0.05, 0.025, 0.0125, 0.0225):
        print(f"random s(eps={eps}) = {buffer_capacity(eps)}")
    print(f"filter convergence(theta=0.01, eps=0.05, delta=0.05, p=0.1, alpha=0.9) = "
          f"{convergence_threshold(0.01, 0.05, 0.05, 0.1, 0.9)}")
    print(f"filter convergence(theta=0.1, eps=0.2, delta=0.2, p=0.5, alpha=0.5) = "
          f"{convergence_threshold(0.1, 0.2, 0.2, 0.5, 0.5)}")


if __name__ == "__main__":
    main()
