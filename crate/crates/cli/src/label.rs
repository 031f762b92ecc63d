//! The label grammar: `A3[x..]{a,b,c}` with one mask character per node
//! (`x` crossed, `.` uncrossed) and integer coefficients in braces.

use anyhow::{anyhow, bail, Context, Result};
use flagcalc::{CartanData, ParabolicMarking, Weight};

/// A parsed bundle label: marking plus weight.
#[derive(Clone, Debug)]
pub struct LabelSpec {
    pub marking: ParabolicMarking,
    pub weight: Weight,
}

pub fn format_label(marking: &ParabolicMarking, weight: &Weight) -> String {
    let coords: Vec<String> = weight.coords().iter().map(|c| c.to_string()).collect();
    format!(
        "{}[{}]{{{}}}",
        marking.cartan().name(),
        marking.mask(),
        coords.join(",")
    )
}

/// Parse a full label `A3[x..]{a,b,c}`.
pub fn parse_label(text: &str) -> Result<LabelSpec> {
    let open_bracket = text
        .find('[')
        .ok_or_else(|| anyhow!("label {text:?} is missing the [mask] part"))?;
    let close_bracket = text
        .find(']')
        .ok_or_else(|| anyhow!("label {text:?} is missing the closing bracket"))?;
    let open_brace = text
        .find('{')
        .ok_or_else(|| anyhow!("label {text:?} is missing the {{coefficients}} part"))?;
    let close_brace = text
        .rfind('}')
        .ok_or_else(|| anyhow!("label {text:?} is missing the closing brace"))?;
    if !(open_bracket < close_bracket && close_bracket < open_brace && open_brace < close_brace) {
        bail!("malformed label {text:?}");
    }
    let cartan = CartanData::parse(&text[..open_bracket])
        .with_context(|| format!("bad Cartan type in {text:?}"))?;
    let marking = ParabolicMarking::from_mask(cartan, &text[open_bracket + 1..close_bracket])
        .with_context(|| format!("bad marking mask in {text:?}"))?;
    let weight = parse_coords(&text[open_brace + 1..close_brace], marking.rank())?;
    Ok(LabelSpec { marking, weight })
}

/// Parse bare coordinates `a,b,c`.
pub fn parse_coords(text: &str, rank: usize) -> Result<Weight> {
    let coords: Vec<i64> = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .with_context(|| format!("bad integer coordinate {part:?}"))
        })
        .collect::<Result<_>>()?;
    if coords.len() != rank {
        bail!("expected {rank} coordinates, found {}", coords.len());
    }
    Ok(Weight::new(coords))
}

/// Parse either a full label or bare coordinates relative to `marking`.
pub fn parse_bundle(text: &str, marking: &ParabolicMarking) -> Result<Weight> {
    let weight = if text.contains('[') {
        let spec = parse_label(text)?;
        if spec.marking != *marking {
            bail!(
                "label {} lives on {}, expected {}",
                format_label(&spec.marking, &spec.weight),
                spec.marking,
                marking
            );
        }
        spec.weight
    } else {
        parse_coords(text, marking.rank())?
    };
    marking
        .validate_label(&weight)
        .map_err(|e| anyhow!("{e}"))?;
    Ok(weight)
}
