use std::fmt::Write;

use hitchin_core::flows::{ScenarioId, Trajectory};

/// Header `t, re_x, im_x, …, re_F, im_F, …` and one row per time.
pub fn trajectory_csv(id: ScenarioId, tr: &Trajectory) -> String {
    let mut cols = vec!["t".to_string()];
    for name in id.labels().iter().chain(id.integral_labels().iter()) {
        cols.push(format!("re_{name}"));
        cols.push(format!("im_{name}"));
    }
    let mut out = cols.join(",");
    out.push('\n');
    for ((t, s), f) in tr.times.iter().zip(&tr.states).zip(&tr.conserved) {
        write!(out, "{t:e}").unwrap();
        for c in s.iter().chain(f.iter()) {
            write!(out, ",{:e},{:e}", c.re, c.im).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hitchin_core::flows::{integrate, FlowScenario};

    #[test]
    fn one_row_per_time_plus_header() {
        let sc = FlowScenario::preset(ScenarioId::G3EqualKappa);
        let tr = integrate(&sc, 0.1, 7).unwrap();
        let text = trajectory_csv(sc.id, &tr);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        let width = lines[0].split(',').count();
        assert_eq!(width, 1 + 2 * (8 + 3));
        assert!(lines.iter().all(|l| l.split(',').count() == width));
    }
}
