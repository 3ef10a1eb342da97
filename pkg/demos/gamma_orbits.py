"""Three tiny systems that show how the reduct operator behaves.

MSJ supports its own belief p, MOL negates it, and M2 chains two contexts.
"""
from emcs import gamma, is_grounded_equilibrium, wfs
from emcs.equilibria import grounded_equilibrium_definite, s_reduct, wfs_sequence
from emcs.fixtures import m2, mol, msj
from emcs.kernel import belief_state
from emcs.oracle import enumerate_equilibria, minimal_equilibria


def show(state):
    return "<" + ", ".join("{" + ", ".join(sorted(map(str, c))) + "}" for c in state) + ">"


for name, make in [("MSJ", msj), ("MOL", mol), ("M2", m2)]:
    system = make()
    print(f"== {name}")
    print("  bridge rules:", [str(r) for c in system.contexts for r in c.bridge_rules])
    eqs = enumerate_equilibria(system)
    print("  equilibria (brute force):", sorted(map(show, eqs)))
    print("  minimal:", sorted(map(show, minimal_equilibria(system))))
    # the orbit of gamma from the least state
    s = system.least_state()
    orbit = [s]
    for _ in range(3):
        s = gamma(system, s)
        orbit.append(s)
    print("  gamma orbit:", " -> ".join(map(show, orbit)))
    print("  wfs iterates:", " -> ".join(map(show, wfs_sequence(system))))
    print("  grounded equilibria:", sorted(show(e) for e in eqs if is_grounded_equilibrium(system, e)))

# %% The definite iteration on a reduct, step by step
state, trace = grounded_equilibrium_definite(s_reduct(m2(), belief_state([], [])))
for step in trace.steps:
    print(f"alpha={step.alpha}: {show(step.state)}")
print("wfs(M2) =", show(wfs(m2())))
