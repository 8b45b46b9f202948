//! Dense linear systems over F_p for small primes.

/// One solution of `rows x = rhs` over F_p, or None when inconsistent.
/// Free variables are set to zero.
pub(crate) fn solve_mod_p(rows: &[Vec<u8>], rhs: &[u8], ncols: usize, p: u8) -> Option<Vec<u8>> {
    let p16 = p as u16;
    let inv = |x: u8| (1..p).find(|&y| (x as u16 * y as u16) % p16 == 1).expect("nonzero residue");
    let mut a: Vec<Vec<u8>> =
        rows.iter().zip(rhs).map(|(r, &b)| r.iter().map(|x| x % p).chain([b % p]).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(piv) = (row..a.len()).find(|&r| a[r][col] != 0) else { continue };
        a.swap(row, piv);
        let k = inv(a[row][col]);
        for x in a[row].iter_mut() {
            *x = ((*x as u16 * k as u16) % p16) as u8;
        }
        for r in 0..a.len() {
            let f = a[r][col];
            if r == row || f == 0 {
                continue;
            }
            for j in 0..=ncols {
                let v = (a[r][j] as u16 + (p16 - f as u16) * a[row][j] as u16) % p16;
                a[r][j] = v as u8;
            }
        }
        pivots.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| r[ncols] != 0) {
        return None;
    }
    let mut x = vec![0u8; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][ncols];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_and_f3() {
        // x0 + x1 = 1, x1 + x2 = 0 over F2
        let x = solve_mod_p(&[vec![1, 1, 0], vec![0, 1, 1]], &[1, 0], 3, 2).unwrap();
        assert_eq!((x[0] + x[1]) % 2, 1);
        assert_eq!((x[1] + x[2]) % 2, 0);
        // x0 + x1 = 1 and x0 + x1 = 0 is inconsistent
        assert!(solve_mod_p(&[vec![1, 1], vec![1, 1]], &[1, 0], 2, 2).is_none());
        // 2 x0 = 1 over F3 gives x0 = 2
        assert_eq!(solve_mod_p(&[vec![2]], &[1], 1, 3).unwrap(), vec![2]);
    }
}
