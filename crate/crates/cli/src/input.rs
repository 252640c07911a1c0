//! Loading command inputs, with the offending file named in every error.

use std::fmt::Display;
use std::path::Path;

use wb_core::interp::Translation;
use wb_core::lab::{ClassFamily, SOStructure};
use wb_core::model::FiniteStructure;
use wb_core::scheme::{build_as, build_com, build_cycle, build_dlo, build_ind, build_pa_minus, Scheme, Theory};
use wb_core::syntax::{parse, parse_untyped, Formula, Signature};
use wb_core::Caps;

/// A failure to load or validate input; exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<wb_core::Error> for InputError {
    fn from(e: wb_core::Error) -> Self {
        InputError(e.to_string())
    }
}

pub type Loaded<T> = Result<T, InputError>;

fn read(path: &str) -> Loaded<String> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))
}

fn in_file<T>(path: &str, r: wb_core::Result<T>) -> Loaded<T> {
    r.map_err(|e| InputError(format!("{path}: {e}")))
}

/// Inline text, or the contents of a file when prefixed with `@`.
pub fn text_arg(arg: &str) -> Loaded<(String, String)> {
    match arg.strip_prefix('@') {
        Some(path) => Ok((read(path)?.trim().to_owned(), path.to_owned())),
        None => Ok((arg.to_owned(), "<argument>".to_owned())),
    }
}

pub fn formula(arg: &str, sig: &Signature, allow_p: bool) -> Loaded<Formula> {
    let (text, origin) = text_arg(arg)?;
    in_file(&origin, parse(&text, sig, allow_p))
}

pub fn formula_untyped(arg: &str) -> Loaded<(Formula, Signature)> {
    let (text, origin) = text_arg(arg)?;
    in_file(&origin, parse_untyped(&text))
}

/// A signature as inline JSON or a JSON file.
pub fn signature(arg: &str) -> Loaded<Signature> {
    if arg.trim_start().starts_with('{') {
        return in_file("<argument>", Signature::from_json(arg));
    }
    in_file(arg, Signature::from_json(&read(arg)?))
}

pub fn structure(path: &str) -> Loaded<FiniteStructure> {
    in_file(path, FiniteStructure::from_json(&read(path)?))
}

pub fn translation(path: &str) -> Loaded<Translation> {
    in_file(path, Translation::from_json(&read(path)?))
}

/// A stock scheme by name, or a scheme file.
pub fn scheme(arg: &str) -> Loaded<Scheme> {
    match arg {
        "ind" => Ok(build_ind()),
        "com" => Ok(build_com()),
        "cycle" => Ok(build_cycle()),
        _ if Path::new(arg).exists() => in_file(arg, Scheme::from_json(&read(arg)?)),
        _ => Err(InputError(format!("{arg}: neither a stock scheme (ind, com, cycle) nor a readable file"))),
    }
}

/// A stock theory by name, or a theory file.
pub fn theory(arg: &str) -> Loaded<Theory> {
    match arg {
        "empty" => Ok(Theory::empty()),
        "as" => Ok(build_as()),
        "dlo" => Ok(build_dlo()),
        "pa-minus" => Ok(build_pa_minus()),
        _ if Path::new(arg).exists() => in_file(arg, Theory::from_json(&read(arg)?)),
        _ => Err(InputError(format!(
            "{arg}: neither a stock theory (empty, as, dlo, pa-minus) nor a readable file"
        ))),
    }
}

pub fn so_structure(ground: &str, classes: &str, caps: &Caps) -> Loaded<SOStructure> {
    let g = structure(ground)?;
    let family = in_file(classes, ClassFamily::from_json(&read(classes)?, &g))?;
    in_file(classes, SOStructure::new(g, family, caps))
}
