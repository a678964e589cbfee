use rand::Rng;

pub type Point = [f64; 2];

/// Square window `[0, side)²` with periodic boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Torus {
    pub side: f64,
}

impl Torus {
    /// Coordinates lie in `[0, side)`, so `|d| < side`.
    fn wrap(&self, d: f64) -> f64 {
        let d = d.abs();
        if d > 0.5 * self.side {
            self.side - d
        } else {
            d
        }
    }

    pub fn dist_sq(&self, a: Point, b: Point) -> f64 {
        let dx = self.wrap(a[0] - b[0]);
        let dy = self.wrap(a[1] - b[1]);
        dx * dx + dy * dy
    }

    pub fn dist(&self, a: Point, b: Point) -> f64 {
        self.dist_sq(a, b).sqrt()
    }

    pub fn uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        [rng.random::<f64>() * self.side, rng.random::<f64>() * self.side]
    }
}

/// Bucket grid over the torus for nearest-point queries.
#[derive(Debug, Clone)]
pub struct NearestGrid {
    torus: Torus,
    cells: usize,
    cell_side: f64,
    start: Vec<u32>,
    items: Vec<u32>,
    /// Points in bucket order, paired with their original index.
    sorted: Vec<(Point, u32)>,
    points: Vec<Point>,
}

impl NearestGrid {
    /// Builds a grid with roughly one point per bucket.
    pub fn new(torus: Torus, points: Vec<Point>) -> Self {
        let cells = ((points.len() as f64).sqrt().floor() as usize).clamp(1, 4096);
        let cell_side = torus.side / cells as f64;
        let bucket = |p: Point| -> usize {
            let cx = ((p[0] / cell_side) as usize).min(cells - 1);
            let cy = ((p[1] / cell_side) as usize).min(cells - 1);
            cy * cells + cx
        };
        let mut count = vec![0u32; cells * cells + 1];
        for &p in &points {
            count[bucket(p) + 1] += 1;
        }
        for i in 1..count.len() {
            count[i] += count[i - 1];
        }
        let mut fill = count.clone();
        let mut items = vec![0u32; points.len()];
        for (i, &p) in points.iter().enumerate() {
            let b = bucket(p);
            items[fill[b] as usize] = i as u32;
            fill[b] += 1;
        }
        let sorted = items.iter().map(|&i| (points[i as usize], i)).collect();
        Self {
            torus,
            cells,
            cell_side,
            start: count,
            items,
            sorted,
            points,
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of and distance to the nearest point, or `None` when empty.
    pub fn nearest(&self, q: Point) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let n = self.cells as isize;
        let cx = ((q[0] / self.cell_side) as isize).min(n - 1);
        let cy = ((q[1] / self.cell_side) as isize).min(n - 1);
        if n >= 5 && cx >= 1 && cx <= n - 2 && cy >= 1 && cy <= n - 2 {
            // Interior query: three contiguous bucket rows, no wrap-around.
            // Anything outside the 3x3 block is more than one cell side away.
            let mut best = (u32::MAX, f64::INFINITY);
            let (cx, cy) = (cx as usize, cy as usize);
            for row in cy - 1..=cy + 1 {
                let b = row * self.cells + cx;
                let run = &self.sorted[self.start[b - 1] as usize..self.start[b + 2] as usize];
                for &(p, i) in run {
                    let dx = q[0] - p[0];
                    let dy = q[1] - p[1];
                    let d = dx * dx + dy * dy;
                    if d < best.1 || (d == best.1 && i < best.0) {
                        best = (i, d);
                    }
                }
            }
            if best.1 <= self.cell_side * self.cell_side {
                return Some((best.0 as usize, best.1.sqrt()));
            }
        }
        let mut best = (usize::MAX, f64::INFINITY);
        let max_ring = (n / 2 + 1) as usize;
        for ring in 0..=max_ring {
            // Any point in ring r is at least (r - 1) cell sides away.
            let reach = (ring as f64 - 1.0).max(0.0) * self.cell_side;
            if reach * reach > best.1 {
                break;
            }
            let r = ring as isize;
            for dy in -r..=r {
                let edge = dy.abs() == r;
                let step = if edge { 1 } else { 2 * r.max(1) };
                let mut dx = -r;
                while dx <= r {
                    let bx = wrap_index(cx + dx, n);
                    let by = wrap_index(cy + dy, n);
                    let b = by * self.cells + bx;
                    for &i in &self.items[self.start[b] as usize..self.start[b + 1] as usize] {
                        let d = self.torus.dist_sq(q, self.points[i as usize]);
                        if d < best.1 || (d == best.1 && (i as usize) < best.0) {
                            best = (i as usize, d);
                        }
                    }
                    dx += step;
                }
            }
            if 2 * ring as isize + 1 >= n {
                break;
            }
        }
        Some((best.0, best.1.sqrt()))
    }
}

/// `i mod n` for `i` within a few multiples of `n`, without a division.
fn wrap_index(mut i: isize, n: isize) -> usize {
    while i < 0 {
        i += n;
    }
    while i >= n {
        i -= n;
    }
    i as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn grid_agrees_with_brute_force() {
        let torus = Torus { side: 1000.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1usize, 2, 7, 50, 400] {
            let pts: Vec<Point> = (0..n).map(|_| torus.uniform(&mut rng)).collect();
            let grid = NearestGrid::new(torus, pts.clone());
            for _ in 0..500 {
                let q = torus.uniform(&mut rng);
                let (i, d) = grid.nearest(q).unwrap();
                let brute = pts.iter().map(|&p| torus.dist(q, p)).fold(f64::INFINITY, f64::min);
                assert_eq!(d, brute, "n = {n}");
                assert_eq!(torus.dist(q, pts[i]), d);
            }
        }
    }

    #[test]
    fn torus_distance_wraps() {
        let t = Torus { side: 10.0 };
        assert!((t.dist([0.5, 0.5], [9.5, 9.5]) - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(t.dist([1.0, 2.0], [1.0, 2.0]), 0.0);
    }
}
