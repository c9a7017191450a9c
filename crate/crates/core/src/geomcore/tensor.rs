use nalgebra::DMatrix;

/// Dense rank-4 array over an `n`-dimensional index range.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        t.data[((i * n + j) * n + k) * n + l] = f(i, j, k, l);
                    }
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.data[((i * n + j) * n + k) * n + l]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let n = self.n;
        self.data[((i * n + j) * n + k) * n + l] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Sum of squares of all components.
    pub fn norm_squared(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Tensor4) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn zip_with(&self, other: &Tensor4, f: impl Fn(f64, f64) -> f64) -> Tensor4 {
        Tensor4 {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> Tensor4 {
        Tensor4 {
            n: self.n,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Components in the frame `ẽ_i = Σ_p e_p a_{pi}`.
    pub fn transform(&self, a: &DMatrix<f64>) -> Tensor4 {
        let n = self.n;
        // contract one slot at a time
        let mut cur = self.clone();
        for slot in 0..4 {
            let mut next = Tensor4::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let idx = [i, j, k, l];
                            let mut s = 0.0;
                            for p in 0..n {
                                let mut src = idx;
                                src[slot] = p;
                                s += a[(p, idx[slot])] * cur.get(src[0], src[1], src[2], src[3]);
                            }
                            next.set(i, j, k, l, s);
                        }
                    }
                }
            }
            cur = next;
        }
        cur
    }
}
