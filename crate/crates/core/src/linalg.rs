//! Row reduction over F_p.

/// Basis of the right kernel `{v : M v = 0}` of a `rows x cols` matrix over F_p.
///
/// Rows are given as slices of length `cols` with entries already reduced mod p.
/// The basis is returned in reduced form: free columns in increasing order,
/// each basis vector having a 1 in its own free column.
pub fn kernel_basis(matrix: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = matrix
        .iter()
        .map(|r| r.iter().map(|x| x % p).collect())
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(found) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, found);
        let inv = crate::modular::inv_mod_prime(m[row][col], p);
        for x in m[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..cols {
                    m[r][c] = (m[r][c] + (p - factor) * m[row][c]) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][f]) % p;
            }
            v
        })
        .collect()
}

/// All F_p-linear combinations of `basis`, in lexicographic order of the
/// coefficient vector.
pub fn span_elements(basis: &[Vec<u64>], dim: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut coeffs = vec![0u64; basis.len()];
    loop {
        let mut v = vec![0u64; dim];
        for (c, b) in coeffs.iter().zip(basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x = (*x + c * y) % p;
            }
        }
        out.push(v);
        if !increment(&mut coeffs, p) {
            return out;
        }
    }
}

/// Lexicographic odometer over F_p^k (last coordinate fastest). Returns false on wraparound.
pub fn increment(digits: &mut [u64], p: u64) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}
