use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{BiSeries, Chart, Laurent};
use crate::rational::{self, Rational};

struct Coeffs<'a>(&'a BiSeries);

impl Serialize for Coeffs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        for ((i, j), c) in self.0.coeffs() {
            map.serialize_entry(&format!("{i},{j}"), &rational::format(c))?;
        }
        map.end()
    }
}

impl Serialize for BiSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let precs: Vec<i64> = self.orders.iter().map(Laurent::prec).collect();
        let uniform = precs.windows(2).all(|w| w[0] == w[1]);
        let mut st = s.serialize_struct("BiSeries", if uniform { 5 } else { 6 })?;
        st.serialize_field("chart", &self.chart)?;
        st.serialize_field("zOrder", &self.z_order())?;
        st.serialize_field("lambdaOrder", &self.lambda_order())?;
        st.serialize_field("poleCap", &self.pole_cap)?;
        if !uniform {
            st.serialize_field("zOrders", &precs)?;
        }
        st.serialize_field("coeffs", &Coeffs(self))?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct Raw {
    chart: Chart,
    z_order: i64,
    lambda_order: usize,
    pole_cap: i64,
    #[serde(default)]
    z_orders: Option<Vec<i64>>,
    coeffs: BTreeMap<String, String>,
}

fn parse_key(key: &str) -> Option<(usize, i64)> {
    let (i, j) = key.split_once(',')?;
    Some((i.trim().parse().ok()?, j.trim().parse().ok()?))
}

impl<'de> Deserialize<'de> for BiSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Raw::deserialize(d)?;
        if raw.lambda_order < 1 {
            return Err(D::Error::custom("lambdaOrder must be at least 1"));
        }
        if raw.pole_cap < 0 {
            return Err(D::Error::custom("poleCap must be non-negative"));
        }
        let precs = match raw.z_orders {
            Some(p) => {
                if p.len() != raw.lambda_order {
                    return Err(D::Error::custom("zOrders length differs from lambdaOrder"));
                }
                if p.iter().min() != Some(&raw.z_order) {
                    return Err(D::Error::custom("zOrder is not the minimum of zOrders"));
                }
                p
            }
            None => vec![raw.z_order; raw.lambda_order],
        };
        let mut buckets: Vec<Vec<(i64, Rational)>> = vec![Vec::new(); raw.lambda_order];
        for (key, val) in &raw.coeffs {
            let (i, j) = parse_key(key)
                .ok_or_else(|| D::Error::custom(format!("bad coefficient key {key:?}")))?;
            if i >= raw.lambda_order || j < -raw.pole_cap || j >= precs[i] {
                return Err(D::Error::custom(format!(
                    "coefficient {key:?} lies outside the window"
                )));
            }
            let c =
                rational::parse(val).map_err(|e| D::Error::custom(format!("at {key:?}: {e}")))?;
            buckets[i].push((j, c));
        }
        let orders = buckets
            .into_iter()
            .zip(precs)
            .map(|(b, p)| Laurent::from_terms(b, p))
            .collect();
        Ok(BiSeries {
            chart: raw.chart,
            pole_cap: raw.pole_cap,
            orders,
        })
    }
}
