#![no_main]

use fano::catalog::VertexFile;
use fano::isom::canonical_form;
use fano::validate_fano;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(vf) = VertexFile::parse(text, "fuzz") else {
        return;
    };
    // hulls grow fast with dimension; keep each run short
    if vf.dim > 4 || vf.vertices.len() > 16 {
        return;
    }
    if let Ok(p) = validate_fano(&vf.points()) {
        let c = canonical_form(&p);
        assert_eq!(c.dim(), p.dim());
        assert_eq!(c.vertices().len(), p.n_vertices());
    }
});
