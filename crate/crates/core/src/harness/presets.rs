//! Shipped experiment presets, one per headline behavior.

pub const PRESET_NAMES: [&str; 8] = [
    "rotation-average",
    "rotation-l2-decay",
    "quadratic-prox",
    "tikhonov-leastnorm",
    "kobayashi-random",
    "cl-convergence",
    "chernoff-demo",
    "euler-odd",
];

pub fn preset(name: &str) -> Option<&'static str> {
    Some(match name {
        // Bounded non-convergent iterates whose weighted averages head to 0.
        "rotation-average" => {
            r#"
seed = 7

[operator]
kind = "skew"
m = [[0.0, 1.0], [-1.0, 0.0]]

[scheme]
kind = "proximal"

[schedule]
kind = "power"
c = 1.0
p = 1.0

[horizon]
n_steps = 10000

[start]
point = [1.0, 0.0]

[[certificates]]
name = "fejer"
p = [0.0, 0.0]

[[certificates]]
name = "velocity"

[outputs]
csv = true
report = true
plots = [["x0", "x1"], ["time", "vel_norm"]]
"#
        }
        // Steps outside l2: the rotation iterates themselves converge to 0.
        "rotation-l2-decay" => {
            r#"
seed = 7

[operator]
kind = "skew"
m = [[0.0, 1.0], [-1.0, 0.0]]

[scheme]
kind = "proximal"

[schedule]
kind = "power"
c = 1.0
p = 0.5

[horizon]
n_steps = 10000

[start]
point = [1.0, 0.0]

[[certificates]]
name = "fejer"
p = [0.0, 0.0]

[[certificates]]
name = "velocity"

[outputs]
csv = true
report = true
plots = [["x0", "x1"]]
"#
        }
        // Plain descent: Fejer, velocity decay and the value rates all hold.
        "quadratic-prox" => {
            r#"
seed = 7

[operator]
kind = "quadratic"
q = [[1.0, 0.0], [0.0, 1.0]]

[scheme]
kind = "proximal"

[schedule]
kind = "constant"
c = 0.5

[horizon]
n_steps = 4000

[start]
point = [1.0, 0.7]

[[certificates]]
name = "fejer"

[[certificates]]
name = "velocity"

[[certificates]]
name = "value_rates"

[outputs]
csv = true
report = true
plots = [["time", "dist_S"]]
"#
        }
        // Slowly vanishing Tikhonov factor selects the least-norm solution.
        "tikhonov-leastnorm" => {
            r#"
seed = 7

[operator]
kind = "quadratic"
q = [[1.0, 0.0], [0.0, 0.0]]

[scheme]
kind = "tikhonov_flow"
eps = { kind = "power_decay", a = 1.0, b = 1.0, p = 1.0 }
dt = 0.1

[horizon]
t_end = 1000.0

[start]
point = [1.0, 1.0]

[[certificates]]
name = "fejer"
p = [0.0, 0.0]

[outputs]
csv = true
report = true
plots = [["x0", "x1"]]
stride = 10
"#
        }
        // Two proximal sequences with different clocks stay within the
        // two-sequence a-priori bound.
        "kobayashi-random" => {
            r#"
seed = 11

[operator]
kind = "skew"
m = [[0.0, 1.0], [-1.0, 0.0]]

[scheme]
kind = "proximal"

[schedule]
kind = "power"
c = 1.0
p = 1.0

[horizon]
n_steps = 300

[start]
point = [1.0, 0.0]

[[certificates]]
name = "kobayashi"
second_schedule = { kind = "constant", c = 0.1 }
u = [0.3, 0.2]
pairs = 10

[outputs]
csv = true
report = true
"#
        }
        // Constant-step resolvent composition against the exponential bound.
        "cl-convergence" => {
            r#"
seed = 7

[operator]
kind = "quadratic"
q = [[1.0]]

[scheme]
kind = "crandall_liggett"
m = 256

[horizon]
t_end = 1.0

[start]
point = [1.0]

[[certificates]]
name = "exponential_formula"
t = 1.0
m_list = [4, 16, 64, 256]

[outputs]
csv = true
report = true
plots = [["time", "x0"]]
"#
        }
        // The resolvent iteration of T = J_1 tracks its own flow.
        "chernoff-demo" => {
            r#"
seed = 7

[operator]
kind = "residual"
map = { kind = "resolvent_of", operator = { kind = "quadratic", q = [[1.0]] }, lambda = 1.0 }

[scheme]
kind = "reference_flow"
tol = 0.02

[horizon]
t_end = 2.0

[start]
point = [1.0]

[[certificates]]
name = "chernoff"
lambda = 1.0
ts = [0.5, 1.0, 2.0]
ns = [1, 2, 4]

[outputs]
csv = true
report = true
stride = 8
"#
        }
        // Odd operator, l2 steps: Euler norms grow monotonically to a
        // finite limit.
        "euler-odd" => {
            r#"
seed = 7

[operator]
kind = "skew"
m = [[0.0, 1.0], [-1.0, 0.0]]

[scheme]
kind = "euler"

[schedule]
kind = "power"
c = 1.0
p = 0.75

[horizon]
n_steps = 10000

[start]
point = [1.0, 0.0]

[[certificates]]
name = "fejer"
p = [0.0, 0.0]

[outputs]
csv = true
report = true
plots = [["x0", "x1"]]
stride = 10
"#
        }
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_parse_and_validate() {
        for name in PRESET_NAMES {
            let text = preset(name).unwrap();
            let config = crate::harness::load_config(text)
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            crate::harness::config::validate(&config)
                .unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(preset("nonsense").is_none());
    }
}
