//! Flat output rows shared by the scan subcommands, with JSONL and CSV
//! writers and parsers.

use std::io::Write;

use dwief::mersenne::MersenneRecord;
use dwief::wieferich::WieferichStatus;
use dwief::{DrinfeldModule, Error, FittingData, Result};
use serde::{Deserialize, Serialize};

use crate::config::Format;

/// Run metadata echoed into every row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunMeta {
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
}

/// One output row. Polynomials are ascending code lists in text form;
/// fields that do not apply to the row's kind are null (JSONL) or empty
/// (CSV).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub phi: String,
    pub a: Option<String>,
    #[serde(rename = "P")]
    pub prime: String,
    pub g: Option<String>,
    pub r: Option<String>,
    pub annihilator: Option<String>,
    pub valuation: Option<String>,
    pub wieferich: Option<bool>,
    #[serde(rename = "super")]
    pub is_super: Option<bool>,
    pub thakur: Option<bool>,
    pub chain_break: Option<u32>,
    pub mersenne: Option<String>,
    pub mersenne_prime: Option<bool>,
    pub flags: String,
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
}

pub const CSV_HEADER: [&str; 20] = [
    "q",
    "p",
    "e",
    "phi",
    "a",
    "P",
    "g",
    "r",
    "annihilator",
    "valuation",
    "wieferich",
    "super",
    "thakur",
    "chain_break",
    "mersenne",
    "mersenne_prime",
    "flags",
    "config_hash",
    "seed",
    "version",
];

impl SearchRecord {
    fn blank(phi: &DrinfeldModule, prime: String, meta: &RunMeta) -> Self {
        let fq = phi.field();
        SearchRecord {
            q: fq.q(),
            p: fq.p(),
            e: fq.e(),
            phi: phi.coeffs_text(),
            a: None,
            prime,
            g: None,
            r: None,
            annihilator: None,
            valuation: None,
            wieferich: None,
            is_super: None,
            thakur: None,
            chain_break: None,
            mersenne: None,
            mersenne_prime: None,
            flags: String::new(),
            config_hash: meta.config_hash.clone(),
            seed: meta.seed,
            version: meta.version.clone(),
        }
    }

    pub fn from_status(phi: &DrinfeldModule, st: &WieferichStatus, meta: &RunMeta) -> Self {
        SearchRecord {
            a: Some(st.base.to_string()),
            g: Some(st.g.to_string()),
            r: Some(st.r.to_string()),
            annihilator: Some(st.annihilator.to_string()),
            valuation: Some(st.valuation.to_string()),
            wieferich: Some(st.is_wieferich),
            is_super: Some(st.is_super),
            thakur: Some(st.thakur),
            chain_break: Some(st.chain_break()),
            flags: st.flags.to_text(),
            ..Self::blank(phi, st.prime.to_string(), meta)
        }
    }

    pub fn from_mersenne(phi: &DrinfeldModule, rec: &MersenneRecord, meta: &RunMeta) -> Self {
        let mut flags = vec![rec.base_class.as_str().to_string()];
        if rec.torsion_base {
            flags.push("torsion_base".into());
        }
        if !rec.h_holds {
            flags.push("h_fails".into());
        }
        if rec.value.is_none() {
            flags.push(format!("too_large:deg<={}", rec.degree));
        }
        match rec.wieferich_of_m {
            Some(true) => flags.push("m_wieferich".into()),
            Some(false) => flags.push("m_not_wieferich".into()),
            None => {}
        }
        SearchRecord {
            a: Some(rec.base.to_string()),
            mersenne: rec.value.as_ref().map(|m| m.to_string()),
            mersenne_prime: rec.is_prime,
            flags: flags.join("|"),
            ..Self::blank(phi, rec.prime.to_string(), meta)
        }
    }

    pub fn from_fitting(phi: &DrinfeldModule, fit: &FittingData, meta: &RunMeta) -> Self {
        SearchRecord {
            g: Some(fit.g.to_string()),
            r: Some(fit.r.to_string()),
            ..Self::blank(phi, fit.prime.to_string(), meta)
        }
    }

    pub fn from_annihilator(
        phi: &DrinfeldModule,
        prime: &dwief::Poly,
        a: &dwief::Poly,
        annihilator: &dwief::Poly,
        chain_break: u32,
        meta: &RunMeta,
    ) -> Self {
        SearchRecord {
            a: Some(a.to_string()),
            annihilator: Some(annihilator.to_string()),
            chain_break: Some(chain_break),
            ..Self::blank(phi, prime.to_string(), meta)
        }
    }
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("record I/O: {e}"))
}

/// Writes the rows in the given format: one JSON object per line, or a CSV
/// file with a fixed header row (written even when there are no rows).
pub fn write_records<W: Write>(records: &[SearchRecord], format: Format, out: W) -> Result<()> {
    match format {
        Format::Jsonl => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, r).map_err(io_err)?;
                out.write_all(b"\n").map_err(io_err)?;
            }
            out.flush().map_err(io_err)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_HEADER).map_err(io_err)?;
            for r in records {
                w.serialize(r).map_err(io_err)?;
            }
            w.flush().map_err(io_err)
        }
    }
}

pub fn parse_records(text: &str, format: Format) -> Result<Vec<SearchRecord>> {
    match format {
        Format::Jsonl => text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).map_err(io_err))
            .collect(),
        Format::Csv => {
            let mut rd = csv::Reader::from_reader(text.as_bytes());
            let header = rd.headers().map_err(io_err)?.clone();
            if header.iter().ne(CSV_HEADER) {
                return Err(Error::Parse(format!("unexpected CSV header {header:?}")));
            }
            rd.deserialize().map(|r| r.map_err(io_err)).collect()
        }
    }
}
