"""Island-model parallel global optimization.

Problems, algorithms and topologies are grouped in namespaces so that a
script reads like::

    from isle import *
    prob = problem.rastrigin(10)
    a = archipelago(topology.ring())
    for _ in range(4):
        a.push_back(island(prob, algorithm.de(100), 20))
    a.evolve(10)
    a.join()
    print(a.best().f)
"""

from types import SimpleNamespace as _ns

from . import _isle
from ._isle import (
    Algorithm,
    Archipelago,
    ChampionArchive,
    Individual,
    Island,
    IsleError,
    ObjectiveError,
    ParameterError,
    Population,
    Problem,
    PruningOutcome,
    Topology,
    multistart_campaign,
    pruning_cycles,
    registry,
    seed_for,
)

island = Island
archipelago = Archipelago
population = Population


def _scripted(objective, lower, upper, integer_dim=0, name="scripted", concurrency_safe=False):
    """A problem whose objective is the Python callable `objective(x) -> float`.

    Calls are serialized unless `concurrency_safe` is true."""
    return Problem(objective, lower, upper, integer_dim, name, concurrency_safe)


def _knapsack(values=None, weights=None, capacity=None, file=None):
    kw = {k: v for k, v in dict(values=values, weights=weights, capacity=capacity, file=file).items() if v is not None}
    return _isle.problem("knapsack", **kw)


problem = _ns(
    rastrigin=lambda dim: _isle.problem("rastrigin", dim=dim),
    rosenbrock=lambda dim: _isle.problem("rosenbrock", dim=dim),
    schwefel=lambda dim: _isle.problem("schwefel", dim=dim),
    griewank=lambda dim: _isle.problem("griewank", dim=dim),
    branin=lambda: _isle.problem("branin"),
    himmelblau=lambda: _isle.problem("himmelblau"),
    knapsack=_knapsack,
    scripted=_scripted,
    by_name=_isle.problem,
)


def _alg(name, **kw):
    return _isle.algorithm(name, **kw)


algorithm = _ns(
    de=lambda generations, f=0.8, cr=0.9: _alg("de", generations=generations, f=f, cr=cr),
    sa_corana=lambda evaluations, t_start, t_final, **kw: _alg(
        "sa_corana", evaluations=evaluations, t_start=t_start, t_final=t_final, **kw
    ),
    pso=lambda generations, **kw: _alg("pso", generations=generations, **kw),
    sga=lambda generations, **kw: _alg("sga", generations=generations, **kw),
    ihs=lambda iterations, **kw: _alg("ihs", iterations=iterations, **kw),
    compass=lambda max_evaluations, **kw: _alg("compass", max_evaluations=max_evaluations, **kw),
    nelder_mead=lambda iterations, tolerance=1e-4: _alg("nelder_mead", iterations=iterations, tolerance=tolerance),
    mbh=lambda inner, **kw: _alg("mbh", inner=inner, **kw),
    monte_carlo=lambda evaluations: _alg("monte_carlo", evaluations=evaluations),
    multistart=lambda inner, starts: _alg("multistart", inner=inner, starts=starts),
    null=lambda: _alg("null"),
    by_name=_alg,
)


def _topo(name, **kw):
    return _isle.topology(name, **kw)


topology = _ns(
    unconnected=lambda: _topo("unconnected"),
    ring=lambda: _topo("ring"),
    fully_connected=lambda: _topo("fully_connected"),
    hypercube=lambda: _topo("hypercube"),
    rim=lambda: _topo("rim"),
    barabasi_albert=lambda m, seed=0: _topo("barabasi_albert", m=m, seed=seed),
    watts_strogatz=lambda k, beta, seed=0: _topo("watts_strogatz", k=k, beta=beta, seed=seed),
    erdos_renyi=lambda p, seed=0: _topo("erdos_renyi", p=p, seed=seed),
    custom=lambda nodes, edges: _topo("custom", nodes=nodes, edges=[list(e) for e in edges]),
    by_name=_topo,
)

# Replacement policies: immigrants replace the worst individual only when
# better (the default), or always.
migration = _ns(
    conditional_worst=lambda: "conditional_worst",
    unconditional_worst=lambda: "unconditional_worst",
    worst_r_policy=lambda: "unconditional_worst",
)

__all__ = [
    "Algorithm",
    "Archipelago",
    "ChampionArchive",
    "Individual",
    "Island",
    "IsleError",
    "ObjectiveError",
    "ParameterError",
    "Population",
    "Problem",
    "PruningOutcome",
    "Topology",
    "algorithm",
    "archipelago",
    "island",
    "migration",
    "multistart_campaign",
    "population",
    "problem",
    "pruning_cycles",
    "registry",
    "seed_for",
    "topology",
]
