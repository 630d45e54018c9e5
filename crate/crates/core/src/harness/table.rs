use std::fmt;

use crate::error::{Error, Result};

/// Observed convergence order between two consecutive rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Value(f64),
    /// The finer error is exactly zero.
    Exact,
    /// A row is missing or the coarser error is zero while the finer is not.
    Missing,
}

impl Order {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Order::Value(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Value(p) => write!(f, "{}", fmt_value(*p)),
            Order::Exact => f.write_str("exact"),
            Order::Missing => f.write_str("NA"),
        }
    }
}

/// Number format shared by every CSV written: 17 significant digits.
pub fn fmt_value(x: f64) -> String {
    format!("{x:.16e}")
}

fn order_pair(e0: Option<f64>, e1: Option<f64>, h0: f64, h1: f64) -> Order {
    match (e0, e1) {
        (Some(_), Some(0.0)) => Order::Exact,
        (Some(a), Some(b)) if a > 0.0 => Order::Value((a / b).ln() / (h0 / h1).ln()),
        _ => Order::Missing,
    }
}

/// `order_j = log(e_j / e_{j+1}) / log(h_j / h_{j+1})` for consecutive rows.
pub fn observed_order(errs: &[f64], hs: &[f64]) -> Result<Vec<Order>> {
    if errs.len() != hs.len() || errs.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "need matching error and spacing lists of length >= 2, got {} and {}",
            errs.len(),
            hs.len()
        )));
    }
    if let Some(e) = errs.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
        return Err(Error::InvalidParameter(format!("errors must be finite and >= 0, got {e}")));
    }
    Ok(errs
        .windows(2)
        .zip(hs.windows(2))
        .map(|(e, h)| order_pair(Some(e[0]), Some(e[1]), h[0], h[1]))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub h: f64,
    /// One entry per column; `None` marks a failed row or a quantity not computed.
    pub errors: Vec<Option<f64>>,
}

/// Sup-norm errors per refinement row.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTable {
    pub columns: Vec<&'static str>,
    pub rows: Vec<ErrorRow>,
}

pub const COLUMNS_1D: [&str; 4] = ["err_u_fe", "err_u_fd", "err_v_fe", "err_v_fd"];
pub const COLUMNS_2D: [&str; 2] = ["err_u", "err_v"];

impl ErrorTable {
    pub fn new(columns: &[&'static str]) -> Self {
        ErrorTable {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r.errors[k]).collect())
    }

    /// Orders between consecutive rows of one column.
    pub fn orders(&self, name: &str) -> Option<Vec<Order>> {
        let col = self.column(name)?;
        Some(
            (1..self.rows.len())
                .map(|j| order_pair(col[j - 1], col[j], self.rows[j - 1].h, self.rows[j].h))
                .collect(),
        )
    }

    /// Header `h,<columns>,<order columns>`; the first row has empty orders.
    pub fn to_csv(&self) -> String {
        let orders: Vec<Vec<Order>> = self
            .columns
            .iter()
            .map(|c| self.orders(c).unwrap_or_default())
            .collect();
        let mut out = String::from("h");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        for c in &self.columns {
            out.push_str(",order_");
            out.push_str(c.trim_start_matches("err_"));
        }
        out.push('\n');
        for (j, row) in self.rows.iter().enumerate() {
            out.push_str(&fmt_value(row.h));
            for e in &row.errors {
                out.push(',');
                match e {
                    Some(x) => out.push_str(&fmt_value(*x)),
                    None => out.push_str("NA"),
                }
            }
            for o in &orders {
                out.push(',');
                if j > 0 {
                    out.push_str(&o[j - 1].to_string());
                }
            }
            out.push('\n');
        }
        out
    }
}
