use schubitope::perm::{Composition, Permutation};
use schubitope::poly::{self, SparsePoly};

use crate::{CliError, Format, SCHEMA_VERSION};

pub fn run(perm: Option<String>, comp: Option<String>, format: Format) -> Result<u8, CliError> {
    let (subject, kind, f): (String, &str, SparsePoly) = match (perm, comp) {
        (Some(word), None) => {
            let w: Permutation = word
                .parse()
                .map_err(|e: schubitope::Error| CliError::Usage(e.to_string()))?;
            (w.to_string(), "schubert", poly::schubert(&w))
        }
        (None, Some(parts)) => {
            let alpha: Composition = parts
                .parse()
                .map_err(|e: schubitope::Error| CliError::Usage(e.to_string()))?;
            (alpha.to_string(), "key", poly::key_polynomial(&alpha))
        }
        _ => {
            return Err(CliError::Usage(
                "expand needs exactly one of --perm or --comp".into(),
            ))
        }
    };

    let nu = poly::specialize_ones(&f);
    let theta = poly::theta_from_poly(&f);

    match format {
        Format::Json => {
            let doc = serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "kind": kind,
                "subject": subject,
                "nu": nu,
                "theta": theta,
                "zero_one": poly::is_zero_one(&f),
                "polynomial": f,
            });
            println!("{}", serde_json::to_string(&doc).expect("serializable"));
        }
        Format::Tsv => {
            println!("kind\t{kind}");
            println!("subject\t{subject}");
            println!("nu\t{nu}");
            println!("theta\t{theta}");
            for (exps, coeff) in f.sorted_terms() {
                let e: Vec<String> = exps.iter().map(|v| v.to_string()).collect();
                println!("term\t{}\t{coeff}", e.join(","));
            }
        }
    }
    Ok(0)
}
