//! Transform of a two-strategy game into a self-anonymous one with every
//! deviation incentive scaled by `1 / (2n)`.

use crate::error::Result;
use crate::game::AnonymousGame;

/// `v(0) = 1/2`, `v(c + 1) = v(c) + (u_1(c) - u_2(c)) / (2n)`; the new game pays
/// `v(x)` for strategy 2 and `v(x + 1)` for strategy 1.
pub fn self_anonymize(game: &AnonymousGame) -> Result<AnonymousGame> {
    game.require_two()?;
    let n = game.n();
    let scale = 1.0 / (2 * n) as f64;
    let tables = game
        .tables()
        .iter()
        .map(|t| {
            let mut v = Vec::with_capacity(n + 1);
            v.push(0.5);
            for c in 0..n {
                v.push(v[c] + (t[0][c] - t[1][c]) * scale);
            }
            vec![v[1..].to_vec(), v[..n].to_vec()]
        })
        .collect();
    game.with_tables(tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::classify;
    use crate::generators::named::gen_majority_minority;

    #[test]
    fn output_is_self_anonymous() {
        let g = gen_majority_minority(6).unwrap();
        let s = self_anonymize(&g).unwrap();
        assert!(classify(&s).self_anonymous);
        for i in 0..6 {
            for x in 0..6 {
                let a = s.row(i, 0)[x] - s.row(i, 1)[x];
                let b = g.row(i, 0)[x] - g.row(i, 1)[x];
                assert!((a - b / 12.0).abs() < 1e-15);
            }
        }
    }
}
