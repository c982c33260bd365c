//! Argument value parsers.

use almost_identities::{BigReal, ExactRational, PrecisionContext};

/// Indices from `--n`, in the order given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexList(pub Vec<u32>);

/// `5`, `1..6` (inclusive), or comma lists such as `1..3,7`. A range whose
/// end is below its start contributes nothing.
pub fn parse_index_list(text: &str) -> Result<IndexList, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u32 = a
                .trim()
                .parse()
                .map_err(|_| format!("bad range start in {part:?}"))?;
            let b: u32 = b
                .trim()
                .parse()
                .map_err(|_| format!("bad range end in {part:?}"))?;
            out.extend(a..=b);
        } else {
            out.push(
                part.parse()
                    .map_err(|_| format!("not an index: {part:?}"))?,
            );
        }
    }
    Ok(IndexList(out))
}

/// A decimal literal or an exact ratio `p/q`, rounded once into the context.
pub fn parse_real(text: &str, ctx: PrecisionContext) -> Result<BigReal, String> {
    let t = text.trim();
    if t.contains('/') {
        let q: ExactRational = t.parse().map_err(|e| format!("{e}"))?;
        Ok(q.to_big_real(ctx))
    } else {
        BigReal::parse_decimal(t, ctx).map_err(|e| format!("{e}"))
    }
}
