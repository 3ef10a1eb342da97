"""Feed a synthetic stream to the incremental driver and time it.

The rule schema is fixed; only the number of constants grows.
"""
import sys
import time

from emcs.evolution import StreamDriver
from emcs.fixtures import SCALING_SPEC, scaling_stream, scaling_system

print(SCALING_SPEC)
instants = int(sys.argv[1]) if len(sys.argv) > 1 else 50

for n in (50, 100, 200, 400):
    pool, obs = scaling_stream(n, instants)
    driver = StreamDriver(scaling_system(), pool)
    t = time.perf_counter()
    last = None
    for o in obs:
        last = driver.feed(o)
    dt = time.perf_counter() - t
    held = sum(map(len, last))
    print(f"pool {n:4d}: {instants} instants in {dt:6.2f}s, {1000 * dt / instants:7.1f} ms/instant, "
          f"{held} atoms in the last state")
