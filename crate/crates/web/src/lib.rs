//! Browser bindings: corpus lookup, product-of-simplices builder, and full
//! reports on pasted polytopes.

use wasm_bindgen::prelude::*;
use z2hodge::corpus;
use z2hodge::report::{analyse, load, FanChoice, Format, Input};

fn fan_choice(fan: &str) -> Result<FanChoice, String> {
    match fan {
        "normal" => Ok(FanChoice::Normal),
        "face" => Ok(FanChoice::Face),
        other => Err(format!("unknown fan `{other}`")),
    }
}

pub fn source(name: &str) -> Result<String, String> {
    corpus::get(name).map(|p| p.to_text()).map_err(|e| e.to_string())
}

pub fn product(blocks: &str, polar: bool) -> Result<String, String> {
    let blocks: Vec<usize> = blocks
        .split(|c: char| c == '-' || c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().ok().filter(|&n: &usize| n > 0).ok_or(format!("bad block size `{s}`")))
        .collect::<Result<_, _>>()?;
    if blocks.is_empty() || blocks.iter().sum::<usize>() > 8 {
        return Err("give 1 to 8 total dimensions".into());
    }
    let p = if polar { corpus::simplex_product_polar(&blocks) } else { corpus::simplex_product(&blocks) };
    Ok(p.to_text())
}

pub fn report(text: &str, fan: &str, json: bool) -> Result<String, String> {
    let input = Input::Text { name: "input".into(), text: text.into() };
    let (name, delta) = load(&input).map_err(|e| e.to_string())?;
    let r = analyse(name, &delta, fan_choice(fan)?, &Default::default()).map_err(|e| e.to_string())?;
    Ok(r.render(if json { Format::Json } else { Format::Table }))
}

#[wasm_bindgen]
pub fn corpus_names() -> String {
    corpus::names().join("\n")
}

#[wasm_bindgen]
pub fn corpus_source(name: &str) -> Result<String, JsError> {
    source(name).map_err(|e| JsError::new(&e))
}

/// Blocks like `"2-3"`; `polar` selects the polar of the product.
#[wasm_bindgen]
pub fn simplex_product(blocks: &str, polar: bool) -> Result<String, JsError> {
    product(blocks, polar).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn hodge_report(text: &str, fan: &str, json: bool) -> Result<String, JsError> {
    report(text, fan, json).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_round_trip() {
        let text = source("square").unwrap();
        let out = report(&text, "normal", false).unwrap();
        assert!(out.contains("complex Betti: 1 0 2 0 1"));
        assert!(report(&text, "sideways", false).is_err());
        assert!(report("2 1\n1 1", "normal", false).is_err());
    }

    #[test]
    fn products() {
        let text = product("1,2", true).unwrap();
        assert_eq!(text, source("polar-product-1-2").unwrap());
        assert!(product("0", false).is_err());
        assert!(product("5-5", false).is_err());
        let json = report(&product("1 1", false).unwrap(), "normal", true).unwrap();
        assert!(json.contains("\"maximal\": true"));
    }
}
