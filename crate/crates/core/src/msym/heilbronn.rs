/// Heilbronn matrices `[a, b, c, d]` of determinant `p` (Cremona's family),
/// acting on Manin symbols by `(u, v) ↦ (ua + vc, ub + vd)`.
pub fn heilbronn_cremona(p: i64) -> Vec<[i64; 4]> {
    let mut out = vec![[1, 0, 0, p]];
    if p == 2 {
        out.extend([[2, 0, 0, 1], [2, 1, 0, 1], [1, 0, 1, 2]]);
        return out;
    }
    let half = (p - 1) / 2;
    for r in -half..=half {
        let (mut x1, mut x2, mut y1, mut y2) = (p, -r, 0i64, 1i64);
        let (mut a, mut b) = (-p, r);
        out.push([x1, x2, y1, y2]);
        while b != 0 {
            let q = (a as f64 / b as f64).round() as i64;
            let c = a - b * q;
            a = -b;
            b = c;
            let x3 = q * x2 - x1;
            x1 = x2;
            x2 = x3;
            let y3 = q * y2 - y1;
            y1 = y2;
            y2 = y3;
            out.push([x1, x2, y1, y2]);
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
