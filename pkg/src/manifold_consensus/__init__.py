"""Consensus, synchronization and balancing of agent swarms on the circle,
the rotation groups SO(n), and the Grassmann manifolds Grass(p, n).

The library is organized around an embedding-centric view of the three
manifolds: agents are averaged in the ambient space and the average is
projected back onto the manifold in closed form.  On top of that sit the
alignment cost functions, the configuration predicates, the continuous
gradient and estimator flows with a projected fixed-step integrator, the
discrete jump-to-the-mean update, and a scenario-driven batch runner.
"""

from .consensus import (
    DEFAULT_PREDICATE_TOL,
    SwarmState,
    cost_P,
    cost_PL,
    is_anti_consensus,
    is_balanced_config,
    is_consensus,
    is_synchronized,
    swarm_centroid,
    sync_error,
)
from .dynamics import (
    EstimatorAntiConsensus,
    EstimatorSync,
    FlowSpec,
    GradientFlow,
    IntegratorConfig,
    LocalFrameSONSync,
    Trajectory,
    VicsekDiscrete,
    circle_rhs,
    estimator_anti_rhs,
    estimator_sync_rhs,
    gradient_rhs,
    grassmann_basis_rhs,
    grassmann_projector_rhs,
    integrate,
    local_frame_son_rhs,
    so_n_rhs,
    vicsek_step,
)
from .graph import (
    GraphSchedule,
    WeightedDigraph,
    classify,
    complete,
    connectivity,
    degrees,
    directed_cycle,
    from_edges,
    integrated_graph,
    is_uniformly_connected,
    laplacian,
    make_graph,
    random_digraph,
    ring_undirected,
)
from .manifolds import (
    GrassmannBasis,
    ManifoldDescriptor,
    ManifoldPoint,
    RetractionError,
    angle_of,
    basis_to_projector,
    chordal_distance,
    circle,
    circle_point,
    embed,
    grassmann,
    membership_violation,
    principal_angles,
    project_to_manifold,
    projector_to_basis,
    random_point,
    retract,
    rotation_group,
    tangent_project,
)
from .means import (
    WHOLE_MANIFOLD,
    Centroid,
    MeanResult,
    aiam,
    centroid,
    critical_rotations,
    iam,
    iam_circle,
    iam_grassmann,
    iam_so_n,
    iam_value,
)
from .scenario import (
    RunResult,
    Scenario,
    ScenarioError,
    parse_scenario,
    preset_scenario,
    presets,
    run,
    scenario_from_dict,
)

__version__ = "0.1.0"
