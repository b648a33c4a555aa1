// SPDX-License-Identifier: Apache-2.0

//! Batched forward pass and hand-written backward pass for one example.
//!
//! Fragment paths that share a source share LSTM prefixes, so each source
//! contributes one trie of states; states at the same depth across all
//! tries (and the context paths) are advanced with one matrix product.

use ndarray::linalg::general_mat_mul;
use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2, ArrayViewMut1, ArrayViewMut2, Axis};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use editpath_core::paths::OperationKind;

use crate::features::{Endpoint, Features};
use crate::params::{Params, T};

pub(crate) fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Softmax of `scores`, shifted by the maximum for stability.
pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let m = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = scores.iter().map(|s| (s - m).exp()).collect();
    let z: f64 = e.iter().sum();
    e.into_iter().map(|x| x / z).collect()
}

fn proj_of(kind: OperationKind) -> T {
    match kind {
        OperationKind::Mov => T::ProjMov,
        OperationKind::Upd => T::ProjUpd,
        OperationKind::Ins => T::ProjIns,
    }
}

/// `c += a ⊗ b`.
fn add_outer(c: &mut ArrayViewMut2<f64>, a: ArrayView1<f64>, b: ArrayView1<f64>) {
    let a2 = a.insert_axis(Axis(1));
    let b2 = b.insert_axis(Axis(0));
    general_mat_mul(1.0, &a2, &b2, 1.0, c);
}

/// One LSTM step, with everything the backward pass needs.
#[derive(Clone, Debug)]
pub(crate) struct Cell {
    pub x: Array1<f64>,
    pub h_prev: Array1<f64>,
    pub c_prev: Array1<f64>,
    /// i, f, g, o after their nonlinearities.
    pub gates: Array1<f64>,
    pub c: Array1<f64>,
    pub tanh_c: Array1<f64>,
    pub h: Array1<f64>,
}

/// Gate activations in place; rows are `[i f g o]` blocks of width `h`.
fn activate(a: &mut [f64], h: usize) {
    for (k, v) in a.iter_mut().enumerate() {
        *v = if (2 * h..3 * h).contains(&k) {
            v.tanh()
        } else {
            sigmoid(*v)
        };
    }
}

pub(crate) fn lstm_cell(
    w: ArrayView2<f64>,
    b: ArrayView1<f64>,
    x: ArrayView1<f64>,
    h_prev: ArrayView1<f64>,
    c_prev: ArrayView1<f64>,
) -> Cell {
    let nin = x.len();
    let h = h_prev.len();
    let mut a = w.slice(s![.., ..nin]).dot(&x) + w.slice(s![.., nin..]).dot(&h_prev) + b;
    activate(a.as_slice_mut().unwrap(), h);
    let c = &a.slice(s![h..2 * h]) * &c_prev + &a.slice(s![..h]) * &a.slice(s![2 * h..3 * h]);
    let tanh_c = c.mapv(f64::tanh);
    let hh = &a.slice(s![3 * h..]) * &tanh_c;
    Cell {
        x: x.to_owned(),
        h_prev: h_prev.to_owned(),
        c_prev: c_prev.to_owned(),
        gates: a,
        c,
        tanh_c,
        h: hh,
    }
}

/// Pre-activation gradient from `dh` and `dc` (the cell-state gradient from
/// later steps), plus the gradient reaching `c_prev`.
fn gate_grads(
    gates: ArrayView1<f64>,
    tanh_c: ArrayView1<f64>,
    c_prev: ArrayView1<f64>,
    dh: ArrayView1<f64>,
    dc: ArrayView1<f64>,
    da: &mut [f64],
    dc_prev: &mut [f64],
) {
    let h = dh.len();
    for k in 0..h {
        let (i, f, g, o) = (gates[k], gates[h + k], gates[2 * h + k], gates[3 * h + k]);
        let t = tanh_c[k];
        let dct = dc[k] + dh[k] * o * (1.0 - t * t);
        da[k] = dct * g * i * (1.0 - i);
        da[h + k] = dct * c_prev[k] * f * (1.0 - f);
        da[2 * h + k] = dct * i * (1.0 - g * g);
        da[3 * h + k] = dh[k] * t * o * (1.0 - o);
        dc_prev[k] = dct * f;
    }
}

/// Returns `(dx, dh_prev, dc_prev)` and accumulates weight gradients.
pub(crate) fn lstm_cell_back(
    w: ArrayView2<f64>,
    cell: &Cell,
    dh: ArrayView1<f64>,
    dc: ArrayView1<f64>,
    gw: &mut ArrayViewMut2<f64>,
    gb: &mut ArrayViewMut1<f64>,
) -> (Array1<f64>, Array1<f64>, Array1<f64>) {
    let nin = cell.x.len();
    let h = dh.len();
    let mut da = Array1::zeros(4 * h);
    let mut dc_prev = Array1::zeros(h);
    gate_grads(
        cell.gates.view(),
        cell.tanh_c.view(),
        cell.c_prev.view(),
        dh,
        dc,
        da.as_slice_mut().unwrap(),
        dc_prev.as_slice_mut().unwrap(),
    );
    add_outer(&mut gw.slice_mut(s![.., ..nin]), da.view(), cell.x.view());
    add_outer(
        &mut gw.slice_mut(s![.., nin..]),
        da.view(),
        cell.h_prev.view(),
    );
    *gb += &da;
    let dx = w.slice(s![.., ..nin]).t().dot(&da);
    let dhp = w.slice(s![.., nin..]).t().dot(&da);
    (dx, dhp, dc_prev)
}

/// Dropout masks, already scaled by `1 / (1 - rate)`.
#[derive(Clone, Debug, Default)]
pub struct Masks {
    pub context: Option<Array2<f64>>,
    pub decoder: Option<Array2<f64>>,
}

impl Masks {
    pub fn sample(
        rng: &mut ChaCha8Rng,
        rate: f64,
        n_context: usize,
        n_steps: usize,
        h: usize,
    ) -> Self {
        if rate <= 0.0 {
            return Masks::default();
        }
        let keep = 1.0 / (1.0 - rate);
        let mut draw = |rows: usize| {
            Array2::from_shape_fn(
                (rows, h),
                |_| if rng.gen::<f64>() < rate { 0.0 } else { keep },
            )
        };
        let context = Some(draw(n_context));
        let decoder = Some(draw(n_steps));
        Masks { context, decoder }
    }
}

/// Everything computed before decoding.
#[derive(Clone, Debug)]
pub struct Encoded {
    use_context: bool,
    x: Array2<f64>,
    gates: Array2<f64>,
    c: Array2<f64>,
    tanh_c: Array2<f64>,
    hs: Array2<f64>,
    ep: Array2<f64>,
    r: Array2<f64>,
    /// Path encodings: fragment pairs, then context paths.
    pub z: Array2<f64>,
    ctx_cells: Vec<Cell>,
    /// Context LSTM outputs, one row per context path.
    pub zc: Array2<f64>,
    /// Class vectors in candidate order, then EOS.
    pub zop: Array2<f64>,
    pub h0: Array1<f64>,
}

pub fn encode(p: &Params, f: &Features, use_context: bool, masks: &Masks) -> Encoded {
    let (d, h) = (p.layout.dims.d, p.layout.dims.h);
    let ek = p.view(T::EmbKind);
    let ei = p.view(T::EmbIndex);
    let mut x = Array2::zeros((f.inputs.len(), d));
    for (row, &(k, i)) in f.inputs.iter().enumerate() {
        let mut r = x.row_mut(row);
        r += &ek.row(k);
        r += &ei.row(i);
    }

    let pw = p.view(T::PathW);
    let (wx, wh) = (pw.slice(s![.., ..d]), pw.slice(s![.., d..]));
    let gx = x.dot(&wx.t()) + p.vector(T::PathB);
    let n = f.state_input.len();
    let mut gates = Array2::zeros((n, 4 * h));
    let mut c = Array2::zeros((n, h));
    let mut tanh_c = Array2::zeros((n, h));
    let mut hs = Array2::zeros((n, h));
    for (depth, &(lo, hi)) in f.layers.iter().enumerate() {
        let m = hi - lo;
        let mut a = Array2::zeros((m, 4 * h));
        for j in 0..m {
            a.row_mut(j).assign(&gx.row(f.state_input[lo + j]));
        }
        let mut hp = Array2::zeros((m, h));
        let mut cp = Array2::<f64>::zeros((m, h));
        if depth > 0 {
            for j in 0..m {
                let pr = f.state_pred[lo + j].expect("non-initial states have a predecessor");
                hp.row_mut(j).assign(&hs.row(pr));
                cp.row_mut(j).assign(&c.row(pr));
            }
            general_mat_mul(1.0, &hp, &wh.t(), 1.0, &mut a);
        }
        for j in 0..m {
            let mut row = a.row_mut(j);
            activate(row.as_slice_mut().unwrap(), h);
            for k in 0..h {
                let cv: f64 = row[h + k] * cp[[j, k]] + row[k] * row[2 * h + k];
                let t = cv.tanh();
                c[[lo + j, k]] = cv;
                tanh_c[[lo + j, k]] = t;
                hs[[lo + j, k]] = row[3 * h + k] * t;
            }
        }
        gates.slice_mut(s![lo..hi, ..]).assign(&a);
    }

    let es = p.view(T::EmbSub);
    let mut ep = Array2::zeros((f.endpoints.len(), d));
    for (e, end) in f.endpoints.iter().enumerate() {
        let mut r = ep.row_mut(e);
        match end {
            Endpoint::Node(row) => r.assign(&x.row(*row)),
            Endpoint::Value(ids) => {
                for &id in ids {
                    r += &es.row(id);
                }
            }
        }
    }
    let np = f.paths.len();
    let mut r = Array2::zeros((np, h + 2 * d));
    for (i, ps) in f.paths.iter().enumerate() {
        r.slice_mut(s![i, ..h]).assign(&hs.row(ps.last));
        r.slice_mut(s![i, h..h + d])
            .assign(&ep.row(ps.first_endpoint));
        r.slice_mut(s![i, h + d..])
            .assign(&ep.row(ps.last_endpoint));
    }
    let z = r.dot(&p.view(T::ProjPath).t()).mapv(f64::tanh);

    let k = f.n_classes();
    let mut zop = Array2::zeros((k, h));
    for kind in OperationKind::ALL {
        let idx: Vec<usize> = (0..f.classes.len())
            .filter(|&i| f.classes[i].1 == kind)
            .collect();
        if idx.is_empty() {
            continue;
        }
        let mut zsel = Array2::zeros((idx.len(), h));
        for (j, &ci) in idx.iter().enumerate() {
            zsel.row_mut(j).assign(&z.row(f.classes[ci].0));
        }
        let o = zsel.dot(&p.view(proj_of(kind)));
        for (j, &ci) in idx.iter().enumerate() {
            zop.row_mut(ci).assign(&o.row(j));
        }
    }
    zop.row_mut(k - 1).assign(&p.vector(T::Eos));

    let nc = if use_context { f.n_context() } else { 0 };
    let mut ctx_cells = Vec::with_capacity(nc);
    let mut zc = Array2::zeros((nc, h));
    let (cw, cb) = (p.view(T::CtxW), p.vector(T::CtxB));
    let (mut hp, mut cp) = (Array1::zeros(h), Array1::zeros(h));
    for j in 0..nc {
        let mut input = z.row(f.n_pairs + j).to_owned();
        if let Some(m) = &masks.context {
            input *= &m.row(j);
        }
        let cell = lstm_cell(cw, cb, input.view(), hp.view(), cp.view());
        zc.row_mut(j).assign(&cell.h);
        hp = cell.h.clone();
        cp = cell.c.clone();
        ctx_cells.push(cell);
    }

    let count = f.n_pairs + nc;
    let mut h0 = Array1::zeros(h);
    for i in 0..f.n_pairs {
        h0 += &z.row(i);
    }
    for j in 0..nc {
        h0 += &zc.row(j);
    }
    if count > 0 {
        h0 /= count as f64;
    }
    Encoded {
        use_context,
        x,
        gates,
        c,
        tanh_c,
        hs,
        ep,
        r,
        z,
        ctx_cells,
        zc,
        zop,
        h0,
    }
}

/// One decoder step.
#[derive(Clone, Debug)]
pub struct Step {
    cell: Cell,
    /// Attention weights over the context rows; empty without context.
    pub alpha: Vec<f64>,
    v: Array1<f64>,
    u: Array1<f64>,
    q: Array1<f64>,
    w: Array1<f64>,
    /// Distribution over all classes (candidates, then EOS).
    pub probs: Vec<f64>,
}

impl Step {
    pub fn cell_h(&self) -> Array1<f64> {
        self.cell.h.clone()
    }

    pub fn cell_c(&self) -> Array1<f64> {
        self.cell.c.clone()
    }
}

/// Runs one decoder step from state `(h_prev, c_prev)` on input `input`.
pub fn decode_step(
    p: &Params,
    e: &Encoded,
    input: ArrayView1<f64>,
    h_prev: ArrayView1<f64>,
    c_prev: ArrayView1<f64>,
) -> Step {
    let cell = lstm_cell(p.view(T::DecW), p.vector(T::DecB), input, h_prev, c_prev);
    let h = cell.h.len();
    let (alpha, v, ctx) = if e.zc.nrows() > 0 {
        let v = p.view(T::AttnW).dot(&cell.h);
        let scores = e.zc.dot(&v);
        let alpha = softmax(scores.as_slice().unwrap());
        let ctx = e.zc.t().dot(&Array1::from(alpha.clone()));
        (alpha, v, ctx)
    } else {
        (Vec::new(), Array1::zeros(h), cell.h.clone())
    };
    let mut u = Array1::zeros(2 * h);
    u.slice_mut(s![..h]).assign(&ctx);
    u.slice_mut(s![h..]).assign(&cell.h);
    let q = p.view(T::QueryW).dot(&u).mapv(f64::tanh);
    let w = p.view(T::PointW).dot(&q);
    let scores = e.zop.dot(&w);
    let probs = softmax(scores.as_slice().unwrap());
    Step {
        cell,
        alpha,
        v,
        u,
        q,
        w,
        probs,
    }
}

/// Teacher-forced pass over the gold sequence followed by EOS.
#[derive(Clone, Debug)]
pub struct Forward {
    pub encoded: Encoded,
    pub steps: Vec<Step>,
    pub targets: Vec<usize>,
    /// Mean negative log-likelihood over the steps.
    pub loss: f64,
}

pub fn forward(p: &Params, f: &Features, use_context: bool, masks: &Masks) -> Forward {
    let e = encode(p, f, use_context, masks);
    let h = p.layout.dims.h;
    let mut targets = f.gold.clone();
    targets.push(f.eos());
    let mut steps = Vec::with_capacity(targets.len());
    let (mut hp, mut cp) = (e.h0.clone(), Array1::zeros(h));
    let mut loss = 0.0;
    for t in 0..targets.len() {
        let mut input = if t == 0 {
            p.vector(T::Start).to_owned()
        } else {
            e.zop.row(targets[t - 1]).to_owned()
        };
        if let Some(m) = &masks.decoder {
            input *= &m.row(t);
        }
        let st = decode_step(p, &e, input.view(), hp.view(), cp.view());
        loss -= st.probs[targets[t]].ln();
        hp = st.cell.h.clone();
        cp = st.cell.c.clone();
        steps.push(st);
    }
    loss /= targets.len() as f64;
    Forward {
        encoded: e,
        steps,
        targets,
        loss,
    }
}

/// Adds `weight * d(loss)/d(params)` into `g`.
pub fn backward(
    p: &Params,
    f: &Features,
    fw: &Forward,
    masks: &Masks,
    weight: f64,
    g: &mut Params,
) {
    let (d, h) = (p.layout.dims.d, p.layout.dims.h);
    let e = &fw.encoded;
    let steps = &fw.steps;
    let scale = weight / steps.len() as f64;
    let mut dzop = Array2::<f64>::zeros(e.zop.raw_dim());
    let mut dzc = Array2::<f64>::zeros(e.zc.raw_dim());
    let mut dh_next = Array1::<f64>::zeros(h);
    let mut dc_next = Array1::<f64>::zeros(h);

    for t in (0..steps.len()).rev() {
        let st = &steps[t];
        let mut ds = Array1::from(st.probs.clone());
        ds[fw.targets[t]] -= 1.0;
        ds *= scale;
        add_outer(&mut dzop.view_mut(), ds.view(), st.w.view());
        let dw = e.zop.t().dot(&ds);
        add_outer(&mut g.view_mut(T::PointW), dw.view(), st.q.view());
        let dq = p.view(T::PointW).t().dot(&dw);
        let dpre = &dq * &st.q.mapv(|x| 1.0 - x * x);
        add_outer(&mut g.view_mut(T::QueryW), dpre.view(), st.u.view());
        let du = p.view(T::QueryW).t().dot(&dpre);
        let dctx = du.slice(s![..h]).to_owned();
        let mut dh = &du.slice(s![h..]) + &dh_next;
        if st.alpha.is_empty() {
            dh += &dctx;
        } else {
            let alpha = Array1::from(st.alpha.clone());
            let dalpha = e.zc.dot(&dctx);
            add_outer(&mut dzc.view_mut(), alpha.view(), dctx.view());
            let dot = alpha.dot(&dalpha);
            let dscore = &alpha * &(&dalpha - dot);
            add_outer(&mut dzc.view_mut(), dscore.view(), st.v.view());
            let dv = e.zc.t().dot(&dscore);
            add_outer(&mut g.view_mut(T::AttnW), dv.view(), st.cell.h.view());
            dh += &p.view(T::AttnW).t().dot(&dv);
        }
        let (mut gw, mut gb) = split_pair(g, T::DecW, T::DecB);
        let (mut dx, dhp, dcp) = lstm_cell_back(
            p.view(T::DecW),
            &st.cell,
            dh.view(),
            dc_next.view(),
            &mut gw,
            &mut gb,
        );
        if let Some(m) = &masks.decoder {
            dx *= &m.row(t);
        }
        if t == 0 {
            g.vector_mut(T::Start).scaled_add(1.0, &dx);
        } else {
            let mut row = dzop.row_mut(fw.targets[t - 1]);
            row += &dx;
        }
        dh_next = dhp;
        dc_next = dcp;
    }

    // decoder initial state is the mean of path and context encodings
    let nc = e.zc.nrows();
    let count = f.n_pairs + nc;
    let mut dz = Array2::<f64>::zeros(e.z.raw_dim());
    if count > 0 {
        let dmean = &dh_next / count as f64;
        for i in 0..f.n_pairs {
            let mut r = dz.row_mut(i);
            r += &dmean;
        }
        for j in 0..nc {
            let mut r = dzc.row_mut(j);
            r += &dmean;
        }
    }

    // context LSTM
    let (mut dhc, mut dcc) = (Array1::zeros(h), Array1::zeros(h));
    for j in (0..nc).rev() {
        let dh = &dzc.row(j) + &dhc;
        let (mut gw, mut gb) = split_pair(g, T::CtxW, T::CtxB);
        let (mut dx, dhp, dcp) = lstm_cell_back(
            p.view(T::CtxW),
            &e.ctx_cells[j],
            dh.view(),
            dcc.view(),
            &mut gw,
            &mut gb,
        );
        if let Some(m) = &masks.context {
            dx *= &m.row(j);
        }
        let mut r = dz.row_mut(f.n_pairs + j);
        r += &dx;
        dhc = dhp;
        dcc = dcp;
    }
    debug_assert!(e.use_context || nc == 0);

    // class projections and EOS
    let k = f.n_classes();
    g.vector_mut(T::Eos).scaled_add(1.0, &dzop.row(k - 1));
    for kind in OperationKind::ALL {
        let idx: Vec<usize> = (0..f.classes.len())
            .filter(|&i| f.classes[i].1 == kind)
            .collect();
        if idx.is_empty() {
            continue;
        }
        let mut zsel = Array2::zeros((idx.len(), h));
        let mut dsel = Array2::zeros((idx.len(), h));
        for (j, &ci) in idx.iter().enumerate() {
            zsel.row_mut(j).assign(&e.z.row(f.classes[ci].0));
            dsel.row_mut(j).assign(&dzop.row(ci));
        }
        general_mat_mul(1.0, &zsel.t(), &dsel, 1.0, &mut g.view_mut(proj_of(kind)));
        let dz_sel = dsel.dot(&p.view(proj_of(kind)).t());
        for (j, &ci) in idx.iter().enumerate() {
            let mut r = dz.row_mut(f.classes[ci].0);
            r += &dz_sel.row(j);
        }
    }

    // path encodings
    let dpre = &dz * &e.z.mapv(|x| 1.0 - x * x);
    general_mat_mul(1.0, &dpre.t(), &e.r, 1.0, &mut g.view_mut(T::ProjPath));
    let dr = dpre.dot(&p.view(T::ProjPath));
    let n = f.state_input.len();
    let mut dhs = Array2::<f64>::zeros((n, h));
    let mut dep = Array2::<f64>::zeros(e.ep.raw_dim());
    for (i, ps) in f.paths.iter().enumerate() {
        let mut a = dhs.row_mut(ps.last);
        a += &dr.slice(s![i, ..h]);
        let mut b = dep.row_mut(ps.first_endpoint);
        b += &dr.slice(s![i, h..h + d]);
        let mut c = dep.row_mut(ps.last_endpoint);
        c += &dr.slice(s![i, h + d..]);
    }
    let mut dx = Array2::<f64>::zeros(e.x.raw_dim());
    {
        let mut gs = g.view_mut(T::EmbSub);
        for (i, end) in f.endpoints.iter().enumerate() {
            match end {
                Endpoint::Node(row) => {
                    let mut r = dx.row_mut(*row);
                    r += &dep.row(i);
                }
                Endpoint::Value(ids) => {
                    for &id in ids {
                        let mut r = gs.row_mut(id);
                        r += &dep.row(i);
                    }
                }
            }
        }
    }

    // path LSTM tries, deepest layer first
    let pw = p.view(T::PathW);
    let wh = pw.slice(s![.., d..]);
    let mut dgx = Array2::<f64>::zeros((f.inputs.len(), 4 * h));
    let mut dcs = Array2::<f64>::zeros((n, h));
    let zero = Array1::<f64>::zeros(h);
    for (depth, &(lo, hi)) in f.layers.iter().enumerate().rev() {
        let m = hi - lo;
        let mut da = Array2::<f64>::zeros((m, 4 * h));
        let mut dcp = Array2::<f64>::zeros((m, h));
        for j in 0..m {
            let sid = lo + j;
            let pred = f.state_pred[sid];
            let cp = match pred {
                Some(pr) => e.c.row(pr),
                None => zero.view(),
            };
            gate_grads(
                e.gates.row(sid),
                e.tanh_c.row(sid),
                cp,
                dhs.row(sid),
                dcs.row(sid),
                da.row_mut(j).as_slice_mut().unwrap(),
                dcp.row_mut(j).as_slice_mut().unwrap(),
            );
            let mut r = dgx.row_mut(f.state_input[sid]);
            r += &da.row(j);
        }
        if depth > 0 {
            let mut hp = Array2::zeros((m, h));
            for j in 0..m {
                hp.row_mut(j)
                    .assign(&e.hs.row(f.state_pred[lo + j].unwrap()));
            }
            general_mat_mul(
                1.0,
                &da.t(),
                &hp,
                1.0,
                &mut g.view_mut(T::PathW).slice_mut(s![.., d..]),
            );
            let dhp = da.dot(&wh);
            for j in 0..m {
                let pr = f.state_pred[lo + j].unwrap();
                let mut a = dhs.row_mut(pr);
                a += &dhp.row(j);
                let mut b = dcs.row_mut(pr);
                b += &dcp.row(j);
            }
        }
    }
    general_mat_mul(
        1.0,
        &dgx.t(),
        &e.x,
        1.0,
        &mut g.view_mut(T::PathW).slice_mut(s![.., ..d]),
    );
    g.vector_mut(T::PathB)
        .scaled_add(1.0, &dgx.sum_axis(Axis(0)));
    dx += &dgx.dot(&pw.slice(s![.., ..d]));
    {
        let mut gk = g.view_mut(T::EmbKind);
        for (row, &(kid, _)) in f.inputs.iter().enumerate() {
            let mut r = gk.row_mut(kid);
            r += &dx.row(row);
        }
    }
    let mut gi = g.view_mut(T::EmbIndex);
    for (row, &(_, iid)) in f.inputs.iter().enumerate() {
        let mut r = gi.row_mut(iid);
        r += &dx.row(row);
    }
}

/// Mutable views of a weight matrix and its bias, which live in disjoint
/// parts of the buffer.
fn split_pair(g: &mut Params, w: T, b: T) -> (ArrayViewMut2<'_, f64>, ArrayViewMut1<'_, f64>) {
    let we = g.layout.entry(w).clone();
    let be = g.layout.entry(b).clone();
    assert!(
        we.offset + we.rows * we.cols <= be.offset,
        "bias follows its matrix"
    );
    let (head, tail) = g.data.split_at_mut(be.offset);
    let wv = ArrayViewMut2::from_shape(
        (we.rows, we.cols),
        &mut head[we.offset..we.offset + we.rows * we.cols],
    )
    .expect("layout matches buffer");
    let bv = ArrayViewMut1::from(&mut tail[..be.rows * be.cols]);
    (wv, bv)
}
