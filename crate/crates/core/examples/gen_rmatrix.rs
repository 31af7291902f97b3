//! Generates R-matrix data files for the orthogonal and symplectic series.
//!
//! Usage: `gen_rmatrix so|sp N [--metric]`. Prints the R-matrix file, or with
//! `--metric` the matching `C` entries as a JSON array.

use qgauss::rmatrix::RMatrix;
use qgauss::QCoeff;

struct Series {
    n: usize,
    /// Twice the weights, so that `q^rho = s^(2 rho)`.
    rho2: Vec<i32>,
    eps: Vec<i32>,
}

fn series(kind: &str, n: usize) -> Result<Series, String> {
    let half = n / 2;
    let mut rho2 = vec![0; n];
    let mut eps = vec![1; n];
    for i in 0..half {
        let r = match kind {
            "so" if n % 2 == 1 => 2 * (half - i) as i32 - 1,
            "so" => 2 * (half - i - 1) as i32,
            "sp" if n % 2 == 0 => 2 * (half - i) as i32,
            "sp" => return Err("sp needs an even dimension".into()),
            _ => return Err(format!("unknown series {kind}")),
        };
        rho2[i] = r;
        rho2[n - 1 - i] = -r;
        if kind == "sp" {
            eps[n - 1 - i] = -1;
        }
    }
    Ok(Series { n, rho2, eps })
}

fn build(s: &Series) -> RMatrix {
    let n = s.n;
    let p = |i: usize| n - 1 - i;
    let mut r = RMatrix::zeros(vec![0; n]);
    for i in 0..n {
        for j in 0..n {
            let c = if i == j && i != p(i) {
                QCoeff::q()
            } else if i == j {
                QCoeff::one()
            } else if j == p(i) {
                QCoeff::q_pow(-1)
            } else {
                QCoeff::one()
            };
            r.set_at(i, j, i, j, c);
        }
    }
    for i in 0..n {
        for j in 0..i {
            let old = r.at(i, j, j, i).clone();
            r.set_at(i, j, j, i, &old + &QCoeff::lambda());
            let sign = QCoeff::from_int((s.eps[i] * s.eps[j]) as i64);
            let c = &(&sign * &QCoeff::s_pow(s.rho2[i] - s.rho2[j])) * &QCoeff::lambda();
            let old = r.at(i, p(i), j, p(j)).clone();
            r.set_at(i, p(i), j, p(j), &old - &c);
        }
    }
    r
}

fn metric(s: &Series) -> String {
    let n = s.n;
    let mut items = Vec::new();
    for i in 0..n {
        let j = n - 1 - i;
        let c = &QCoeff::from_int(s.eps[i] as i64) * &QCoeff::s_pow(s.rho2[j]);
        items.push(format!("[{}, {}, {}]", i + 1, j + 1, serde_json::to_string(&c.to_string()).unwrap()));
    }
    format!("[{}]", items.join(", "))
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.len() < 2 {
        eprintln!("usage: gen_rmatrix so|sp N [--metric]");
        std::process::exit(2);
    }
    let n: usize = match args[1].parse() {
        Ok(n) if n >= 2 => n,
        _ => {
            eprintln!("N must be an integer >= 2");
            std::process::exit(2);
        }
    };
    let s = match series(&args[0], n) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    if args.iter().any(|a| a == "--metric") {
        println!("{}", metric(&s));
        return;
    }
    let r = build(&s);
    if !r.check_yang_baxter() {
        eprintln!("warning: generated matrix fails the Yang-Baxter check");
    }
    print!("{}", r.to_json_string());
}
