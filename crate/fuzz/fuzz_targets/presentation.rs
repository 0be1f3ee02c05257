#![no_main]

use fano::enumerate::{reconstruct, Presentation};
use fano::isom::are_isomorphic;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(pres) = Presentation::from_json(text) else {
        return;
    };
    if pres.dim > 4 || pres.n > 16 {
        return;
    }
    if let Ok(p) = reconstruct(&pres) {
        // a successful reconstruction must survive its own round trip
        let q = reconstruct(&Presentation::of_polytope(&p)).expect("round trip");
        assert!(are_isomorphic(&p, &q).is_some());
    }
});
