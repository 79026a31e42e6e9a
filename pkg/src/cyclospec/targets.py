"""Reference values for the reproduction suite.

These are the published figures the tool is expected to regenerate; the
repro commands recompute each quantity and compare cell by cell.
"""

# (order, name) -> (approximate value, relatively dense)
DENSITY_TARGETS = {
    (5, "tau"): (1.618033989, True),
    (10, "tau"): (1.618033989, True),
    (10, "tau2"): (2.618033989, True),
    (7, "lambda"): (2.246979604, True),
    (14, "lambda"): (2.246979604, True),
    (8, "delta"): (2.414213562, True),
    (9, "kappa"): (2.879385242, False),
    (18, "kappa"): (2.879385242, True),
    (12, "mu"): (2.732050808, True),
}

# The odd-order upper comparison value for the one non-dense case.
KAPPA9_THRESHOLD = 2.822714843

# (order, name) -> (s, t) pre-window half-widths, quadratic cases.
INTERVAL_TARGETS = {
    (5, "tau"): (4.45406, 1.70130),
    (10, "tau"): (2.75276, 2.75276),
    (10, "tau2"): (1.70130, 1.05146),
    (8, "delta"): (2.41421, 1.0),
    (12, "mu"): (7.46410, 1.15470),
}

# (order, name) -> missing-point classification on the seed disk.
MISSING_TARGETS = {
    (8, "delta"): "none",
    (10, "tau"): "boundary_only",
    (10, "tau2"): "boundary_only",
    (5, "tau"): "interior",
    (12, "mu"): "interior",
}

# (order, name) -> (region radius, covering value r_c, iteration n)
COVERING_TARGETS = {
    (5, "tau"): (1.6180339895, 0.7639320250, 6),
    (10, "tau"): (1.6180339895, 0.6498393940, 3),
    (10, "tau2"): (1.3763819202, 1.051462225, 1),
    (7, "lambda"): (1.2469796034, 1.109916265, 1),
    (14, "lambda"): (1.2469796034, 1.025716864, 1),
    (8, "delta"): (1.3065629649, 1.082392201, 1),
    (18, "kappa"): (1.4619022000, 1.015426612, 1),
    (12, "mu"): (1.4142135622, 1.035276182, 1),
}

# (order, name) -> (configurations, tiles, exact?) for the tile census.
CONFIG_TARGETS = {
    (5, "tau"): (7823, 12, True),
    (10, "tau"): (3818, 5, True),
    (10, "tau2"): (20, 5, True),
    (7, "lambda"): (279, 201, False),
    (14, "lambda"): (815, 189, False),
    (8, "delta"): (26, 5, True),
    (18, "kappa"): (881, 154, False),
    (12, "mu"): (1002, 104, False),
}

CATALOG_ROW_COUNT = 14
