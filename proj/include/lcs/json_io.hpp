#pragma once

// JSON schemas for the file-based interfaces ("schema": "lcs-lab/1") and the
// small expression grammar for 1-forms on the command line.

#include <json.hpp>
#include <string>

#include "lcs/cell_complex.hpp"
#include "lcs/forms.hpp"
#include "lcs/genfam.hpp"
#include "lcs/novikov.hpp"

namespace lcs {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaTag = "lcs-lab/1";

// {"dim": n, "cells": [...counts...], "incidence": [{"cell": [k, i],
//  "faces": [[j, sign], ...], "paths": [[[edge, s], ...], ...]?}],
//  "flags": {"is_closed_manifold": ..., "is_orientable": ...}}
CellComplex complex_from_json(const json& j);
json complex_to_json(const CellComplex& c);

// {"edge_values": [ints]}
Cocycle cocycle_from_json(const json& j);
json cocycle_to_json(const Cocycle& c);

json betti_to_json(const NovikovBetti& b);

// {"degree": k, "nq": n, "np": m, "terms": [{"basis": ["dq1", "dp1", ...],
//  "coeff": ...}]} where a coefficient is either
//  {"terms": [{"k": [...], "kind": "cos"|"sin", "p": [...], "c": number}]}
//  or the product form {"trig": [[kvec, cos_c, sin_c], ...],
//                       "p_poly": [[powvec, c], ...]}.
// Numbers may be doubles, "a/b" strings, or [num, den] pairs.
TrigForm form_from_json(const json& j);
json form_to_json(const TrigForm& f);

// {"n": ..., "m": ..., "quad": [[...]], "ball_radius": ...,
//  "core": [{"coeff": c, "freq": [...], "sine": bool, "xi_pow": [...]}]}
GeneratingFamily family_from_json(const json& j);
json family_to_json(const GeneratingFamily& f);

json error_to_json(const Error& e);

// Sums of `c dqi`, `c cos(k.q) dqi`, `c sin(k.q) dqi`; coefficients are
// decimals or rationals a/b, phases are integer combinations of q1..qn.
// See the CLI help for the EBNF.
TrigForm parse_one_form(const std::string& src, int min_n = 0);

// Same grammar without the trailing dq factor: a scalar trig polynomial.
TrigPoly parse_scalar(const std::string& src, int min_n = 0);

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

} // namespace lcs
