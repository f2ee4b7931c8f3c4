use crate::{Error, HalfInt, Result};

const TOL: f64 = 1e-12;

fn check_metric(d: &[Vec<f64>]) -> Result<()> {
    let n = d.len();
    for (i, row) in d.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Parse(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        if row[i].abs() > TOL {
            return Err(Error::Rejected(format!("d({i},{i}) is not zero")));
        }
        for j in 0..n {
            if !row[j].is_finite() || row[j] < 0.0 || (row[j] - d[j][i]).abs() > TOL {
                return Err(Error::Rejected(format!("d({i},{j}) is negative or asymmetric")));
            }
            if i != j && row[j] <= TOL {
                return Err(Error::Rejected(format!("distinct points {i} and {j} at distance 0")));
            }
            for k in 0..n {
                if row[j] > row[k] + d[k][j] + TOL {
                    return Err(Error::Rejected(format!("triangle inequality fails on ({i},{k},{j})")));
                }
            }
        }
    }
    Ok(())
}

/// Whether `d(x, z) ≤ max(d(x, y), d(y, z))` for all triples.
pub fn is_ultrametric(d: &[Vec<f64>]) -> Result<bool> {
    check_metric(d)?;
    let n = d.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if d[x][z] > d[x][y].max(d[y][z]) + TOL {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The three pair sums of a quadruple, largest first.
fn sums<T: Copy + PartialOrd + std::ops::Add<Output = T>>(d: &[Vec<T>], q: [usize; 4]) -> [T; 3] {
    let [x, y, z, w] = q;
    let mut s = [d[x][y] + d[z][w], d[x][z] + d[y][w], d[x][w] + d[y][z]];
    s.sort_by(|a, b| b.partial_cmp(a).expect("comparable"));
    s
}

fn quadruples(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n).flat_map(move |a| {
        (a + 1..n).flat_map(move |b| (b + 1..n).flat_map(move |c| (c + 1..n).map(move |e| [a, b, c, e])))
    })
}

/// The least `δ` with `(x, y)_w ≥ min((x, z)_w, (y, z)_w) − δ` for all
/// points, i.e. half the largest gap between the two largest pair sums.
pub fn hyperbolicity_delta(d: &[Vec<f64>]) -> Result<f64> {
    check_metric(d)?;
    Ok(quadruples(d.len()).map(|q| {
        let s = sums(d, q);
        (s[0] - s[1]) / 2.0
    }).fold(0.0, f64::max))
}

/// Exact `δ` for an integer metric.
pub fn delta_exact(d: &[Vec<i64>]) -> Result<HalfInt> {
    let as_f: Vec<Vec<f64>> = d.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    check_metric(&as_f)?;
    Ok(HalfInt::from_twice(quadruples(d.len()).map(|q| {
        let s = sums(d, q);
        s[0] - s[1]
    }).max().unwrap_or(0)))
}

/// Reads a whitespace-separated square table; blank lines and `#` comments
/// are skipped.
pub fn parse_distance_table(text: &str) -> Result<Vec<Vec<f64>>> {
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|x| x.parse::<f64>().map_err(|_| Error::Parse(format!("'{x}' is not a number"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(Error::Parse("the distance table is not square".into()));
    }
    Ok(rows)
}
