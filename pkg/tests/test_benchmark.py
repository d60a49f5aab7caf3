"""Field-engine throughput, recorded (not asserted - machine dependent)."""

import time

import numpy as np

import skybeam as sb


def test_record_field_throughput(rf10cm):
    layout = sb.make_planar_array(3.2, 0.05)
    target = np.array([0.0, 0.0, 32.0])
    cmd = sb.focus_command(layout, rf10cm, target, 1.0)
    grid = sb.ObservationGrid.horizontal(target, 91, 3.0)

    sb.evaluate_field_fast(layout, rf10cm, cmd, grid)  # warm-up
    start = time.perf_counter()
    sb.evaluate_field_fast(layout, rf10cm, cmd, grid)
    elapsed = time.perf_counter() - start

    evals = layout.n_active * grid.n_u * grid.n_v
    per_minute = evals / elapsed * 60.0
    print(f"\nfield throughput: {evals:.3g} element-point evaluations in "
          f"{elapsed:.2f} s = {per_minute:.3g} per minute "
          f"(informal target: 1e9 per minute on desktop hardware)")
