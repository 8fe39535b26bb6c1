#pragma once

// Shared small group definitions for tests.

#include "iwk1/group.hpp"

namespace corpus {

// G = Z_p (H trivial, e = 0)
inline iwk1::GroupDef zp() {
  iwk1::GroupDef d;
  d.p = 3;
  d.e = 0;
  d.nH = 1;
  d.h_table = {0};
  d.gamma_action = {0};
  d.label = "zp";
  d.validate();
  return d;
}

// G = Z/3 x Z_p (H = Z/3, trivial action, e = 0)
inline iwk1::GroupDef z3xzp() {
  iwk1::GroupDef d;
  d.p = 3;
  d.e = 0;
  d.nH = 3;
  d.h_table.assign(9, 0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d.h_table[i * 3 + j] = (i + j) % 3;
  d.gamma_action = {0, 1, 2};
  d.label = "z3xzp";
  d.validate();
  return d;
}

// abelian with e = 1: G = Z/3 x Z_p but Z = Gamma^3 proper
inline iwk1::GroupDef abelian_e1() {
  iwk1::GroupDef d;
  d.p = 3;
  d.e = 1;
  d.nH = 3;
  d.h_table.assign(9, 0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d.h_table[i * 3 + j] = (i + j) % 3;
  d.gamma_action = {0, 1, 2};
  d.label = "abelian_e1";
  d.validate();
  return d;
}

// the desk example: H = Z/9, e = 1, gamma acts by h -> h^4
inline iwk1::GroupDef modular() {
  iwk1::GroupDef d;
  d.p = 3;
  d.e = 1;
  d.nH = 9;
  d.h_table.assign(81, 0);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) d.h_table[i * 9 + j] = (i + j) % 9;
  d.gamma_action.resize(9);
  for (int i = 0; i < 9; ++i) d.gamma_action[i] = (4 * i) % 9;
  d.label = "modular";
  d.validate();
  return d;
}

// Heisenberg-type: H = Z/3 x Z/3 = <x,y>, gamma: x -> xy, y -> y
inline iwk1::GroupDef heisenberg() {
  iwk1::GroupDef d;
  d.p = 3;
  d.e = 1;
  d.nH = 9;  // element (i,j) = x^i y^j at index 3*i + j
  d.h_table.assign(81, 0);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      int xi = i / 3, yi = i % 3, xj = j / 3, yj = j % 3;
      d.h_table[i * 9 + j] = 3 * ((xi + xj) % 3) + (yi + yj) % 3;
    }
  d.gamma_action.resize(9);
  for (int i = 0; i < 9; ++i) {
    int xi = i / 3, yi = i % 3;
    d.gamma_action[i] = 3 * xi + (yi + xi) % 3;  // x^a y^b -> x^a y^(b+a)
  }
  d.label = "heisenberg";
  d.validate();
  return d;
}

}  // namespace corpus
