//! Fixed instances: majority-minority, the three-player irrational game, and
//! the hidden-minority game.

use crate::error::{domain, Result};
use crate::game::AnonymousGame;

/// First half seeks the majority, second half the minority; strategy 2 pays 1/2.
pub fn gen_majority_minority(n: usize) -> Result<AnonymousGame> {
    if n == 0 || n % 2 == 1 {
        return Err(domain(format!("n = {n} must be even and positive")));
    }
    let up: Vec<f64> = (0..n).map(|x| (2 * x + 1) as f64 / (2 * n) as f64).collect();
    let down: Vec<f64> = up.iter().map(|v| 1.0 - v).collect();
    let half = vec![0.5; n];
    let class_of = (0..n).map(|i| usize::from(i >= n / 2)).collect();
    AnonymousGame::from_tables(n, 2, vec![vec![up, half.clone()], vec![down, half]], class_of)
}

/// Three players (row, column, matrix) whose only equilibrium is irrational.
pub fn gen_irrational3() -> AnonymousGame {
    AnonymousGame::two_strategy(vec![
        (vec![0.0, 1.0, 1.0], vec![1.0, 0.5, 0.0]),
        (vec![1.0, 0.0, 0.0], vec![0.0, 0.25, 0.5]),
        (vec![0.0, 0.0, 1.0], vec![1.0, 0.5, 0.0]),
    ])
    .expect("fixed tables are valid")
}

/// The irrational equilibrium `(p_r, p_c, p_m)`.
pub fn irrational3_equilibrium() -> [f64; 3] {
    let r = 241f64.sqrt();
    [(r - 7.0) / 12.0, (r - 7.0) / 16.0, (23.0 - r) / 36.0]
}

/// Strategy 1 pays 1/2 to everyone; strategy 2 pays 0 except to player `h`
/// when all others play 1.
pub fn gen_hidden_minority(n: usize, h: usize) -> Result<AnonymousGame> {
    if h >= n {
        return Err(domain(format!("hidden player {h} is outside 0..{n}")));
    }
    let mut special = vec![0.0; n];
    special[n - 1] = 1.0;
    let tables = vec![vec![vec![0.5; n], vec![0.0; n]], vec![vec![0.5; n], special]];
    let class_of = (0..n).map(|i| usize::from(i == h)).collect();
    AnonymousGame::from_tables(n, 2, tables, class_of)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::pbd_pmf;
    use crate::game::{expected_payoff, step_lipschitz_constant, Strategy};

    #[test]
    fn majority_minority_values() {
        let g = gen_majority_minority(4).unwrap();
        assert_eq!(g.payoff(0, Strategy::One, 1).unwrap(), 0.375);
        assert_eq!(g.payoff(3, Strategy::One, 0).unwrap(), 0.875);
        assert!((step_lipschitz_constant(&g) - 0.25).abs() < 1e-15);
        assert!(gen_majority_minority(5).is_err());
    }

    #[test]
    fn irrational_values() {
        let g = gen_irrational3();
        assert_eq!(g.payoff(0, Strategy::Two, 1).unwrap(), 0.5);
        // Matrix player against (0.8, 2/3): strategy 1 earns 8/15, strategy 2 earns 4/15.
        let pmf = pbd_pmf(&[0.8, 2.0 / 3.0]).unwrap();
        let e1 = expected_payoff(&g, 2, Strategy::One, &pmf).unwrap();
        let e2 = expected_payoff(&g, 2, Strategy::Two, &pmf).unwrap();
        assert!((e1 - e2 - 4.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn hidden_minority_values() {
        let g = gen_hidden_minority(8, 3).unwrap();
        assert_eq!(g.payoff(3, Strategy::Two, 7).unwrap(), 1.0);
        assert_eq!(g.payoff(2, Strategy::Two, 7).unwrap(), 0.0);
        assert_eq!(step_lipschitz_constant(&g), 1.0);
        assert!(gen_hidden_minority(8, 8).is_err());
    }
}
