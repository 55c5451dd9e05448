//! Panel Gauss–Legendre quadrature on intervals.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

/// Gauss–Legendre nodes and weights on `[−1, 1]`, nodes ascending.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let rule =
        GaussLegendre::new(NonZeroUsize::new(order).expect("quadrature order must be positive"));
    let mut pairs = rule.as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Breakpoints of `[0, b]` refined geometrically toward `0`.
///
/// Panels grow by factor 2 from width `scale · 2⁻ᵏ` up to `scale`, continue
/// geometrically to `max_width`, and are uniform of width at most
/// `max_width` afterwards.
pub fn graded_panels(b: f64, scale: f64, max_width: f64, levels: usize) -> Vec<(f64, f64)> {
    let mut cuts = vec![0.0];
    let mut x = scale * 0.5f64.powi(levels as i32);
    while x < scale.min(b) {
        cuts.push(x);
        x *= 2.0;
    }
    let mut last = *cuts.last().unwrap();
    let mut width = last.max(scale.min(b) * 0.5);
    while last < b {
        width = (width * 2.0).min(max_width);
        let next = (last + width).min(b);
        if b - next < 0.25 * width {
            cuts.push(b);
            break;
        }
        cuts.push(next);
        last = next;
    }
    if *cuts.last().unwrap() < b {
        cuts.push(b);
    }
    cuts.windows(2)
        .map(|w| (w[0], w[1]))
        .filter(|(a, b)| b > a)
        .collect()
}

/// Nodes and weights of an order-`order` rule on each panel.
pub fn panel_rule(panels: &[(f64, f64)], order: usize) -> Vec<(f64, f64)> {
    let base = gauss_legendre(order);
    let mut out = Vec::with_capacity(panels.len() * order);
    for &(a, b) in panels {
        let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
        out.extend(base.iter().map(|(x, w)| (mid + half * x, half * w)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let rule = gauss_legendre(10);
        let s: f64 = rule.iter().map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn graded_rule_resolves_a_spike() {
        let panels = graded_panels(std::f64::consts::PI, 1e-4, 0.05, 30);
        assert!(panels.windows(2).all(|w| (w[0].1 - w[1].0).abs() == 0.0));
        assert_eq!(panels.last().unwrap().1, std::f64::consts::PI);
        assert!(panels.iter().all(|(a, b)| b - a <= 0.05 + 1e-15));
        // ∫₀^π ε/(ε² + θ²) dθ = atan(π/ε).
        let eps = 1e-4;
        let s: f64 = panel_rule(&panels, 16)
            .iter()
            .map(|(x, w)| w * eps / (eps * eps + x * x))
            .sum();
        assert!((s - (std::f64::consts::PI / eps).atan()).abs() < 1e-10);
    }
}
