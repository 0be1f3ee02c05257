#![no_main]

use fano::catalog::{Catalog, CatalogFile, Construction, EmbeddedResolver};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = CatalogFile::parse(text, "fuzz") else {
        return;
    };
    let small = file.dim <= 4
        && file.entries.len() <= 8
        && file.entries.iter().all(|e| match &e.construction {
            Construction::Vertices { vertices } => vertices.len() <= 16,
            Construction::Relations { n, .. } => *n <= 16,
            Construction::Product { .. } => true,
        });
    if !small {
        return;
    }
    if let Ok(cat) = Catalog::from_text(text, "fuzz", &EmbeddedResolver) {
        assert_eq!(cat.entries.len(), file.entries.len());
    }
});
