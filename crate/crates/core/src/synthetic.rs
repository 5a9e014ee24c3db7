//! Seeded generators for demo and test data: a transaction log shaped like
//! a mobile-money fraud dataset, and a smaller fraud set with two
//! informative numeric features.

use crate::frame::{Column, Frame, Timestamp};
use crate::rng::SplitMix64;

fn unit(rng: &mut SplitMix64) -> f64 {
    // 53 random bits in (0, 1]; never 0 so the log below stays finite.
    ((rng.next_u64() >> 11) + 1) as f64 / (1u64 << 53) as f64
}

/// Standard normal draw (Box–Muller, one value per call).
fn normal(rng: &mut SplitMix64) -> f64 {
    let (u1, u2) = (unit(rng), unit(rng));
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn ids(prefix: &str, n: usize, rng: &mut SplitMix64, pool: usize) -> Column {
    let values = (0..n)
        .map(|_| Some(format!("{prefix}_{}", 1 + rng.below(pool))))
        .collect::<Vec<_>>();
    Column::categorical(prefix, values)
}

/// 16 columns: 5 numeric (`CountryCode` constant 256) and 11 categorical
/// (`CurrencyCode` constant "UGX", `TransactionStartTime` as ISO text,
/// `ChannelId` with 4 classes, `ProviderId` with 6). Needs `n_rows >= 2`.
pub fn transactions(n_rows: usize, seed: u64) -> Frame {
    let mut rng = SplitMix64::new(seed);
    let n = n_rows;
    let tx: Vec<Option<String>> = (0..n)
        .map(|i| Some(format!("TransactionId_{}", 1000 + i)))
        .collect();
    let batch = ids("BatchId", n, &mut rng, n.max(2));
    let account = ids("AccountId", n, &mut rng, 40);
    let subscription = ids("SubscriptionId", n, &mut rng, 40);
    let customer = ids("CustomerId", n, &mut rng, 60);
    let provider = ids("ProviderId", n, &mut rng, 6);
    let product = ids("ProductId", n, &mut rng, 20);
    let categories = [
        "airtime",
        "financial_services",
        "utility_bill",
        "data_bundles",
        "tv",
    ];
    let category: Vec<Option<&str>> = (0..n)
        .map(|_| Some(categories[rng.below(categories.len())]))
        .collect();
    let channel = ids("ChannelId", n, &mut rng, 4);

    let start = crate::frame::parse_timestamp("2018-11-15T02:18:49Z").expect("valid start");
    let mut t = start.epoch_s;
    let mut amount = Vec::with_capacity(n);
    let mut value = Vec::with_capacity(n);
    let mut times = Vec::with_capacity(n);
    let mut pricing = Vec::with_capacity(n);
    let mut fraud = Vec::with_capacity(n);
    for i in 0..n {
        let is_fraud = match i {
            0 => true,
            1 => false,
            _ => rng.below(50) == 0,
        };
        let scale = if is_fraud { 50_000.0 } else { 2_000.0 };
        let magnitude = (scale * (1.0 + normal(&mut rng).abs())).round();
        let a = if rng.below(5) == 0 {
            -magnitude
        } else {
            magnitude
        };
        amount.push(Some(a));
        value.push(Some(a.abs()));
        t += 60 + rng.below(7200) as i64;
        times.push(Some(Timestamp::from_epoch(t).to_string()));
        pricing.push(Some(rng.below(5) as i64));
        fraud.push(Some(i64::from(is_fraud)));
    }
    Frame::new(vec![
        Column::categorical("TransactionId", tx),
        batch,
        account,
        subscription,
        customer,
        Column::categorical("CurrencyCode", vec![Some("UGX"); n]),
        Column::int("CountryCode", vec![Some(256); n]),
        provider,
        product,
        Column::categorical("ProductCategory", category),
        channel,
        Column::float("Amount", amount),
        Column::int(
            "Value",
            value.iter().map(|v| v.map(|v: f64| v as i64)).collect(),
        ),
        Column::categorical("TransactionStartTime", times),
        Column::int("PricingStrategy", pricing),
        Column::int("FraudResult", fraud),
    ])
    .expect("generated columns are consistent")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FraudConfig {
    pub n_rows: usize,
    /// Probability of the positive class.
    pub positive_rate: f64,
    /// Class mean shift of each informative feature, in standard deviations.
    pub separation: f64,
}

impl Default for FraudConfig {
    fn default() -> Self {
        Self {
            n_rows: 2000,
            positive_rate: 0.2,
            separation: 2.0,
        }
    }
}

/// `Value` and `Amount` are drawn from independent class-conditional
/// Gaussians; `ChannelId`, `PricingStrategy` and `Noise` ignore the label.
pub fn fraud_set(config: &FraudConfig, seed: u64) -> Frame {
    let mut rng = SplitMix64::new(seed);
    let n = config.n_rows;
    let mut cols: [Vec<Option<f64>>; 3] = Default::default();
    let mut channel = Vec::with_capacity(n);
    let mut pricing = Vec::with_capacity(n);
    let mut label = Vec::with_capacity(n);
    for _ in 0..n {
        let positive = unit(&mut rng) <= config.positive_rate;
        let shift = if positive { config.separation } else { 0.0 };
        cols[0].push(Some(
            ((1000.0 + 250.0 * (normal(&mut rng) + shift)) * 100.0).round() / 100.0,
        ));
        cols[1].push(Some(
            ((500.0 + 120.0 * (normal(&mut rng) + shift)) * 100.0).round() / 100.0,
        ));
        cols[2].push(Some(normal(&mut rng)));
        channel.push(Some(format!("ChannelId_{}", 1 + rng.below(4))));
        pricing.push(Some(rng.below(5) as i64));
        label.push(Some(i64::from(positive)));
    }
    let [value, amount, noise] = cols;
    Frame::new(vec![
        Column::categorical("ChannelId", channel),
        Column::float("Noise", noise),
        Column::float("Value", value),
        Column::int("PricingStrategy", pricing),
        Column::float("Amount", amount),
        Column::int("FraudResult", label),
    ])
    .expect("generated columns are consistent")
}
