from arlbsg.scenarios.base import ScenarioSpec, Truth, generate, \
    generate_locations, simulate_crp_cluster_counts
