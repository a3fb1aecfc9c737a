//! Double and triple series: Kampe de Feriet, Srivastava-Daoust and F(3).

use kdf_reductions::{
    eval_float, make_f3, make_kdf, make_sd, rat, taylor_coeffs, ArgMonomial, EvalOptions, F3Groups, F3Shape, KdfShape,
    SdParam, SdShape,
};

fn main() -> kdf_reductions::Result<()> {
    let x = ArgMonomial::x;

    // F^{1:1;1}_{1:0;0}[d : a ; b ; e : - ; - ; x, x]
    let kdf = make_kdf(&KdfShape {
        coupled_num: vec![rat(3, 2)?],
        row_num: vec![rat(1, 3)?],
        col_num: vec![rat(2, 5)?],
        coupled_den: vec![rat(5, 2)?],
        arg1: x(),
        arg2: x(),
        ..Default::default()
    });
    println!("KdF coefficients: {:?}", strings(&taylor_coeffs(&kdf, 4)?));

    // (d)_{r+2s} / (e)_{r+2s} with arguments x and x^2/4
    let sd = make_sd(&SdShape {
        coupled_num: vec![SdParam::new(rat(3, 2)?, [1, 2])],
        coupled_den: vec![SdParam::new(rat(5, 2)?, [1, 2])],
        row_num: vec![SdParam::new(rat(1, 3)?, [1, 0])],
        arg1: x(),
        arg2: ArgMonomial::new(rat(1, 4)?, 2),
        ..Default::default()
    })?;
    println!("S-D coefficients: {:?}", strings(&taylor_coeffs(&sd, 4)?));

    let f3 = make_f3(&F3Shape {
        num: F3Groups { all: vec![rat(3, 2)?], single2: vec![rat(1, 3)?], single3: vec![rat(2, 5)?], ..Default::default() },
        den: F3Groups { all: vec![rat(5, 2)?], ..Default::default() },
        arg1: ArgMonomial::new(rat(-1, 1)?, 1),
        arg2: x(),
        arg3: x(),
    });
    println!("F(3) coefficients: {:?}", strings(&taylor_coeffs(&f3, 4)?));

    let opts = EvalOptions::default();
    for (name, spec) in [("KdF", &kdf), ("S-D", &sd), ("F(3)", &f3)] {
        let r = eval_float(spec, 0.25, &opts)?;
        println!("{name:5} at 1/4: {:.15}  ({} terms)", r.value, r.terms);
    }
    Ok(())
}

fn strings(v: &[kdf_reductions::Rational]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}
