#include "rxnemb/chem/smiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "rxnemb/common/error.hpp"

namespace rxnemb::chem {

namespace {

// Standard valences used for implicit-hydrogen resolution. An atom whose
// bond valence exceeds every listed value gets explicit_h = 0 (USPTO
// strings contain hypervalent S/P, so this must not be an error).
const std::vector<int>& standard_valences(Element e) {
  static const std::vector<int> kB = {3};
  static const std::vector<int> kC = {4};
  static const std::vector<int> kN = {3};
  static const std::vector<int> kO = {2};
  static const std::vector<int> kP = {3, 5};
  static const std::vector<int> kS = {2, 4, 6};
  static const std::vector<int> kHalogen = {1};
  static const std::vector<int> kNone = {};
  switch (e) {
    case Element::B: return kB;
    case Element::C: return kC;
    case Element::N: return kN;
    case Element::O: return kO;
    case Element::P: return kP;
    case Element::S: return kS;
    case Element::F:
    case Element::Cl:
    case Element::Br:
    case Element::I: return kHalogen;
    case Element::Other: return kNone;
  }
  return kNone;
}

int implicit_hydrogens(Element e, double bond_valence_sum) {
  const auto& valences = standard_valences(e);
  const int used = static_cast<int>(std::ceil(bond_valence_sum - 1e-9));
  for (int v : valences) {
    if (v >= used) return v - used;
  }
  return 0;
}

// Valence contribution of one bond as seen from `atom`. Aromatic bonds
// count 1.5 except at aromatic O/S, whose ring bonds are both formally
// single (furan, thiophene); without this the S in c1ccsc1 would grow an H.
double endpoint_valence(const Atom& atom, BondOrder order) {
  if (order == BondOrder::Aromatic && atom.aromatic &&
      (atom.element == Element::O || atom.element == Element::S)) {
    return 1.0;
  }
  return bond_valence(order);
}

std::vector<double> valence_sums(const MolecularGraph& g) {
  std::vector<double> sums(g.atoms.size(), 0.0);
  for (const Bond& bond : g.bonds) {
    sums[static_cast<std::size_t>(bond.a)] +=
        endpoint_valence(g.atoms[static_cast<std::size_t>(bond.a)], bond.order);
    sums[static_cast<std::size_t>(bond.b)] +=
        endpoint_valence(g.atoms[static_cast<std::size_t>(bond.b)], bond.order);
  }
  return sums;
}

bool is_aromatic_organic(char c) {
  return c == 'b' || c == 'c' || c == 'n' || c == 'o' || c == 'p' || c == 's';
}

struct PendingRing {
  int atom = -1;
  std::optional<BondOrder> order;
  std::size_t offset = 0;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  MolecularGraph run() {
    if (text_.empty()) {
      throw ParseError(ErrorCode::UnknownToken, "empty SMILES", 0);
    }
    while (pos_ < text_.size()) {
      step();
    }
    if (!ring_table_.empty()) {
      throw ParseError(ErrorCode::UnbalancedRing, "unclosed ring closure",
                       ring_table_.begin()->second.offset);
    }
    if (!branch_stack_.empty()) {
      throw ParseError(ErrorCode::UnbalancedParen, "unclosed branch",
                       branch_offsets_.back());
    }
    if (pending_bond_) {
      throw ParseError(ErrorCode::UnknownToken, "dangling bond symbol", pending_offset_);
    }
    resolve_hydrogens();
    return std::move(graph_);
  }

 private:
  void step() {
    const char c = text_[pos_];
    switch (c) {
      case '(':
        if (prev_atom_ < 0) {
          throw ParseError(ErrorCode::UnbalancedParen, "branch before any atom", pos_);
        }
        branch_stack_.push_back(prev_atom_);
        branch_offsets_.push_back(pos_);
        ++pos_;
        return;
      case ')':
        if (branch_stack_.empty()) {
          throw ParseError(ErrorCode::UnbalancedParen, "unmatched ')'", pos_);
        }
        prev_atom_ = branch_stack_.back();
        branch_stack_.pop_back();
        branch_offsets_.pop_back();
        ++pos_;
        return;
      case '-':
      case '/':
      case '\\':
        set_pending(BondOrder::Single);
        return;
      case '=':
        set_pending(BondOrder::Double);
        return;
      case '#':
        set_pending(BondOrder::Triple);
        return;
      case ':':
        set_pending(BondOrder::Aromatic);
        return;
      case '%': {
        if (pos_ + 2 >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
            !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
          throw ParseError(ErrorCode::UnknownToken, "'%' needs two digits", pos_);
        }
        const int number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
        ring_closure(number, pos_);
        pos_ += 3;
        return;
      }
      case '[':
        parse_bracket_atom();
        return;
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      ring_closure(c - '0', pos_);
      ++pos_;
      return;
    }
    parse_organic_atom();
  }

  void set_pending(BondOrder order) {
    if (pending_bond_) {
      throw ParseError(ErrorCode::UnknownToken, "two bond symbols in a row", pos_);
    }
    if (prev_atom_ < 0) {
      throw ParseError(ErrorCode::UnknownToken, "bond before any atom", pos_);
    }
    pending_bond_ = order;
    pending_offset_ = pos_;
    ++pos_;
  }

  void parse_organic_atom() {
    const std::size_t at = pos_;
    const char c = text_[pos_];
    Atom atom;
    if (c == 'C' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'l') {
      atom.symbol = "Cl";
      pos_ += 2;
    } else if (c == 'B' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'r') {
      atom.symbol = "Br";
      pos_ += 2;
    } else if (c == 'B' || c == 'C' || c == 'N' || c == 'O' || c == 'P' || c == 'S' ||
               c == 'F' || c == 'I') {
      atom.symbol = std::string(1, c);
      ++pos_;
    } else if (is_aromatic_organic(c)) {
      atom.symbol = std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      atom.aromatic = true;
      ++pos_;
    } else {
      throw ParseError(ErrorCode::UnknownToken,
                       std::string("unexpected character '") + c + "'", pos_);
    }
    atom.element = classify_element(atom.symbol);
    atom.explicit_h = -1;  // resolved after parsing
    add_atom(std::move(atom), at);
  }

  void parse_bracket_atom() {
    const std::size_t at = pos_;
    ++pos_;  // '['
    // isotope (accepted, discarded)
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;

    if (pos_ >= text_.size()) {
      throw ParseError(ErrorCode::UnknownToken, "unterminated bracket atom", at);
    }

    Atom atom;
    char c = text_[pos_];
    if (std::isupper(static_cast<unsigned char>(c))) {
      atom.symbol = std::string(1, c);
      ++pos_;
      if (pos_ < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_])) &&
          text_[pos_] != 'h') {
        // two-letter symbol; 'h' excluded so [CH4] reads as C + H count
        atom.symbol += text_[pos_];
        ++pos_;
      }
    } else if (std::islower(static_cast<unsigned char>(c))) {
      atom.aromatic = true;
      std::string sym(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      ++pos_;
      if ((c == 's' || c == 'a' || c == 't') && pos_ < text_.size() && text_[pos_] == 'e') {
        sym += 'e';  // se / te (as handled below)
        ++pos_;
      } else if (c == 'a' && pos_ < text_.size() && text_[pos_] == 's') {
        sym += 's';
        ++pos_;
      }
      atom.symbol = sym;
    } else {
      throw ParseError(ErrorCode::UnknownToken, "expected element symbol in bracket", pos_);
    }
    atom.element = classify_element(atom.symbol);

    // chirality (accepted, discarded)
    if (pos_ < text_.size() && text_[pos_] == '@') {
      ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '@') ++pos_;
    }

    bool h_given = false;
    int hcount = 0;
    if (pos_ < text_.size() && text_[pos_] == 'H') {
      h_given = true;
      hcount = 1;
      ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        hcount = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          hcount = hcount * 10 + (text_[pos_] - '0');
          ++pos_;
        }
      }
    }
    if (hcount > 8) {
      throw ParseError(ErrorCode::ValenceUnderflow, "more than 8 explicit hydrogens", at);
    }

    int charge = 0;
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const int sign = text_[pos_] == '+' ? 1 : -1;
      const char sym = text_[pos_];
      ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        int magnitude = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          magnitude = magnitude * 10 + (text_[pos_] - '0');
          ++pos_;
        }
        charge = sign * magnitude;
      } else {
        charge = sign;
        while (pos_ < text_.size() && text_[pos_] == sym) {
          charge += sign;
          ++pos_;
        }
      }
    }

    if (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        throw ParseError(ErrorCode::UnknownToken, "atom map needs digits", pos_);
      }
      int map = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        map = map * 10 + (text_[pos_] - '0');
        ++pos_;
      }
      atom.atom_map = map;
    }

    if (pos_ >= text_.size() || text_[pos_] != ']') {
      throw ParseError(ErrorCode::UnknownToken, "expected ']'", pos_ < text_.size() ? pos_ : at);
    }
    ++pos_;

    atom.formal_charge = charge;
    atom.explicit_h = hcount;
    if (h_given) bracket_h_check_.push_back({graph_.atom_count(), at});
    add_atom(std::move(atom), at);
  }

  void add_atom(Atom atom, std::size_t offset) {
    const int idx = graph_.atom_count();
    graph_.atoms.push_back(std::move(atom));
    if (prev_atom_ >= 0) {
      make_bond(prev_atom_, idx, pending_bond_, offset);
    } else if (pending_bond_) {
      throw ParseError(ErrorCode::UnknownToken, "bond with no preceding atom", pending_offset_);
    }
    pending_bond_.reset();
    prev_atom_ = idx;
  }

  void make_bond(int a, int b, std::optional<BondOrder> order, std::size_t offset) {
    if (a == b) {
      throw ParseError(ErrorCode::UnknownToken, "self bond", offset);
    }
    for (const Bond& bond : graph_.bonds) {
      if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a)) {
        throw ParseError(ErrorCode::UnknownToken, "duplicate bond between atoms", offset);
      }
    }
    BondOrder resolved;
    if (order) {
      resolved = *order;
    } else {
      const bool both_aromatic = graph_.atoms[static_cast<std::size_t>(a)].aromatic &&
                                 graph_.atoms[static_cast<std::size_t>(b)].aromatic;
      resolved = both_aromatic ? BondOrder::Aromatic : BondOrder::Single;
    }
    if (resolved == BondOrder::Aromatic &&
        (!graph_.atoms[static_cast<std::size_t>(a)].aromatic ||
         !graph_.atoms[static_cast<std::size_t>(b)].aromatic)) {
      throw ParseError(ErrorCode::UnknownToken, "aromatic bond between non-aromatic atoms",
                       offset);
    }
    graph_.bonds.push_back({a, b, resolved});
  }

  void ring_closure(int number, std::size_t offset) {
    if (prev_atom_ < 0) {
      throw ParseError(ErrorCode::UnbalancedRing, "ring closure before any atom", offset);
    }
    auto it = ring_table_.find(number);
    if (it == ring_table_.end()) {
      ring_table_[number] = {prev_atom_, pending_bond_, offset};
      pending_bond_.reset();
      return;
    }
    PendingRing open = it->second;
    ring_table_.erase(it);
    std::optional<BondOrder> order;
    if (open.order && pending_bond_ && *open.order != *pending_bond_) {
      throw ParseError(ErrorCode::UnknownToken, "ring closure bond mismatch", offset);
    }
    order = open.order ? open.order : pending_bond_;
    pending_bond_.reset();
    make_bond(open.atom, prev_atom_, order, offset);
  }

  void resolve_hydrogens() {
    const std::vector<double> valence_sum = valence_sums(graph_);
    std::vector<double> sigma_sum(graph_.atoms.size(), 0.0);
    for (const Bond& bond : graph_.bonds) {
      const double s = bond.order == BondOrder::Aromatic ? 1.0 : bond_valence(bond.order);
      sigma_sum[static_cast<std::size_t>(bond.a)] += s;
      sigma_sum[static_cast<std::size_t>(bond.b)] += s;
    }
    for (std::size_t i = 0; i < graph_.atoms.size(); ++i) {
      Atom& atom = graph_.atoms[i];
      if (atom.explicit_h < 0) {
        atom.explicit_h = implicit_hydrogens(atom.element, valence_sum[i]);
      }
    }
    // Bracket-specified H counts must fit the element's valence envelope.
    // Aromatic bonds count 1 here so pyrrole-type [nH] passes.
    for (const auto& [idx, offset] : bracket_h_check_) {
      const Atom& atom = graph_.atoms[static_cast<std::size_t>(idx)];
      if (atom.element == Element::Other) continue;
      const auto& valences = standard_valences(atom.element);
      const int allowed = valences.back() + std::abs(atom.formal_charge);
      const int used = static_cast<int>(std::ceil(sigma_sum[static_cast<std::size_t>(idx)] - 1e-9));
      if (atom.explicit_h + used > allowed) {
        throw ParseError(ErrorCode::ValenceUnderflow,
                         "bracket H count conflicts with bonds", offset);
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  MolecularGraph graph_;
  int prev_atom_ = -1;
  std::optional<BondOrder> pending_bond_;
  std::size_t pending_offset_ = 0;
  std::vector<int> branch_stack_;
  std::vector<std::size_t> branch_offsets_;
  std::map<int, PendingRing> ring_table_;
  std::vector<std::pair<int, std::size_t>> bracket_h_check_;
};

bool writable_bare(const MolecularGraph& g, int idx, double valence_sum) {
  const Atom& atom = g.atoms[static_cast<std::size_t>(idx)];
  if (atom.element == Element::Other) return false;
  if (atom.formal_charge != 0) return false;
  if (atom.symbol != element_symbol(atom.element)) return false;
  if (atom.aromatic) {
    const Element e = atom.element;
    if (!(e == Element::B || e == Element::C || e == Element::N || e == Element::O ||
          e == Element::P || e == Element::S)) {
      return false;
    }
  }
  return implicit_hydrogens(atom.element, valence_sum) == atom.explicit_h;
}

std::string bond_token(const MolecularGraph& g, const Bond& bond) {
  const bool both_aromatic = g.atoms[static_cast<std::size_t>(bond.a)].aromatic &&
                             g.atoms[static_cast<std::size_t>(bond.b)].aromatic;
  switch (bond.order) {
    case BondOrder::Single: return both_aromatic ? "-" : "";
    case BondOrder::Double: return "=";
    case BondOrder::Triple: return "#";
    case BondOrder::Aromatic: return "";
  }
  return "";
}

std::string atom_token(const MolecularGraph& g, int idx, double valence_sum) {
  const Atom& atom = g.atoms[static_cast<std::size_t>(idx)];
  std::string sym = atom.symbol;
  if (atom.aromatic) {
    for (char& c : sym) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (writable_bare(g, idx, valence_sum)) return sym;
  std::string out = "[" + sym;
  if (atom.explicit_h == 1) {
    out += "H";
  } else if (atom.explicit_h > 1) {
    out += "H" + std::to_string(atom.explicit_h);
  }
  if (atom.formal_charge == 1) {
    out += "+";
  } else if (atom.formal_charge == -1) {
    out += "-";
  } else if (atom.formal_charge > 1) {
    out += "+" + std::to_string(atom.formal_charge);
  } else if (atom.formal_charge < -1) {
    out += "-" + std::to_string(-atom.formal_charge);
  }
  out += "]";
  return out;
}

}  // namespace

MolecularGraph parse_molecule(const std::string& smiles) {
  Parser parser(smiles);
  return parser.run();
}

WriteResult write_smiles_traced(const MolecularGraph& graph) {
  if (graph.atoms.empty()) {
    throw Error(ErrorCode::CountMismatch, "cannot write an empty graph");
  }
  const int n = graph.atom_count();
  auto adj = graph.adjacency();
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());

  const std::vector<double> valence_sum = valence_sums(graph);
  std::map<std::pair<int, int>, const Bond*> bond_of;
  for (const Bond& bond : graph.bonds) {
    bond_of[{std::min(bond.a, bond.b), std::max(bond.a, bond.b)}] = &bond;
  }
  auto find_bond = [&](int a, int b) -> const Bond& {
    return *bond_of.at({std::min(a, b), std::max(a, b)});
  };

  // DFS to classify edges: spanning-tree children vs ring-closure back edges.
  std::vector<int> visit_order;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> closures(static_cast<std::size_t>(n));  // partner atoms
  std::map<std::pair<int, int>, int> closure_number;

  {
    // Iterative DFS, neighbors in ascending index order. Edges to already
    // visited atoms (other than the tree parent) become ring closures.
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    std::vector<std::size_t> cursor(static_cast<std::size_t>(n), 0);
    std::vector<int> path{0};
    seen[0] = true;
    visit_order.push_back(0);
    while (!path.empty()) {
      const int u = path.back();
      auto& cur = cursor[static_cast<std::size_t>(u)];
      if (cur >= adj[static_cast<std::size_t>(u)].size()) {
        path.pop_back();
        continue;
      }
      const int v = adj[static_cast<std::size_t>(u)][cur++];
      if (v == parent[static_cast<std::size_t>(u)]) continue;
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        parent[static_cast<std::size_t>(v)] = u;
        children[static_cast<std::size_t>(u)].push_back(v);
        visit_order.push_back(v);
        path.push_back(v);
      } else {
        const auto key = std::make_pair(std::min(u, v), std::max(u, v));
        if (!closure_number.count(key)) {
          closure_number[key] = 0;  // assigned during emission
          closures[static_cast<std::size_t>(u)].push_back(v);
          closures[static_cast<std::size_t>(v)].push_back(u);
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!seen[static_cast<std::size_t>(i)]) {
      throw Error(ErrorCode::CountMismatch, "graph is disconnected; write per component");
    }
  }

  // Emit. Ring numbers are allocated smallest-free and released on close.
  std::ostringstream out;
  std::vector<bool> number_in_use(100, false);
  std::map<std::pair<int, int>, int> open_numbers;
  std::vector<bool> emitted(static_cast<std::size_t>(n), false);

  auto emit_ring_digit = [&](std::ostream& os, int number) {
    if (number < 10) {
      os << number;
    } else {
      os << '%' << number;  // always two digits for 10..99
    }
  };

  struct Frame {
    int atom;
    std::size_t child_idx = 0;
    bool opened_paren = false;
  };

  auto emit_atom = [&](int u) {
    out << atom_token(graph, u, valence_sum[static_cast<std::size_t>(u)]);
    emitted[static_cast<std::size_t>(u)] = true;
    for (int v : closures[static_cast<std::size_t>(u)]) {
      const auto key = std::make_pair(std::min(u, v), std::max(u, v));
      auto it = open_numbers.find(key);
      if (it == open_numbers.end()) {
        int number = 1;
        while (number < 100 && number_in_use[static_cast<std::size_t>(number)]) ++number;
        if (number >= 100) {
          throw Error(ErrorCode::CountMismatch, "more than 99 simultaneous ring closures");
        }
        number_in_use[static_cast<std::size_t>(number)] = true;
        open_numbers[key] = number;
        out << bond_token(graph, find_bond(u, v));
        emit_ring_digit(out, number);
      } else {
        const int number = it->second;
        out << bond_token(graph, find_bond(u, v));
        emit_ring_digit(out, number);
        number_in_use[static_cast<std::size_t>(number)] = false;
        open_numbers.erase(it);
      }
    }
  };

  std::vector<Frame> stack;
  emit_atom(0);
  stack.push_back({0});
  while (!stack.empty()) {
    Frame& frame = stack.back();
    const auto& kids = children[static_cast<std::size_t>(frame.atom)];
    if (frame.child_idx >= kids.size()) {
      if (frame.opened_paren) out << ')';
      stack.pop_back();
      continue;
    }
    const int child = kids[frame.child_idx];
    const bool last = frame.child_idx + 1 == kids.size();
    ++frame.child_idx;
    Frame next{child};
    if (!last) {
      out << '(';
      next.opened_paren = true;
    }
    out << bond_token(graph, find_bond(frame.atom, child));
    emit_atom(child);
    stack.push_back(next);
  }

  return {out.str(), visit_order};
}

std::string write_smiles(const MolecularGraph& graph) {
  return write_smiles_traced(graph).smiles;
}

Reaction parse_reaction(const std::string& rxn_smiles, const std::string& id) {
  std::vector<std::size_t> arrows;
  for (std::size_t i = 0; i < rxn_smiles.size(); ++i) {
    if (rxn_smiles[i] == '>') arrows.push_back(i);
  }
  if (arrows.size() != 2) {
    throw ParseError(ErrorCode::UnknownToken,
                     "reaction SMILES needs exactly two '>' separators",
                     arrows.empty() ? rxn_smiles.size() : arrows.back());
  }
  const std::string reactants = rxn_smiles.substr(0, arrows[0]);
  const std::string agents = rxn_smiles.substr(arrows[0] + 1, arrows[1] - arrows[0] - 1);
  const std::string products = rxn_smiles.substr(arrows[1] + 1);

  auto split_components = [](const std::string& side) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= side.size()) {
      const std::size_t dot = side.find('.', start);
      if (dot == std::string::npos) {
        parts.push_back(side.substr(start));
        break;
      }
      parts.push_back(side.substr(start, dot - start));
      start = dot + 1;
    }
    if (parts.size() == 1 && parts[0].empty()) parts.clear();
    return parts;
  };

  Reaction rxn;
  rxn.id = id;
  auto parse_side = [&](const std::vector<std::string>& parts, const char* side_name,
                        std::vector<MolecularGraph>& dest) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      try {
        dest.push_back(parse_molecule(parts[i]));
      } catch (const ParseError& e) {
        throw ParseError(e.code(),
                         std::string(side_name) + " component " + std::to_string(i) +
                             " ('" + parts[i] + "') failed to parse",
                         e.offset());
      }
    }
  };

  auto reactant_parts = split_components(reactants);
  const auto agent_parts = split_components(agents);
  reactant_parts.insert(reactant_parts.end(), agent_parts.begin(), agent_parts.end());
  const auto product_parts = split_components(products);
  if (reactant_parts.empty()) {
    throw Error(ErrorCode::EmptySide, "reaction '" + id + "' has an empty reactant side");
  }
  if (product_parts.empty()) {
    throw Error(ErrorCode::EmptySide, "reaction '" + id + "' has an empty product side");
  }
  parse_side(reactant_parts, "reactant", rxn.reactant_components);
  parse_side(product_parts, "product", rxn.product_components);
  return rxn;
}

std::string write_reaction_smiles(const Reaction& rxn) {
  std::ostringstream out;
  for (std::size_t i = 0; i < rxn.reactant_components.size(); ++i) {
    if (i) out << '.';
    out << write_smiles(rxn.reactant_components[i]);
  }
  out << ">>";
  for (std::size_t i = 0; i < rxn.product_components.size(); ++i) {
    if (i) out << '.';
    out << write_smiles(rxn.product_components[i]);
  }
  return out.str();
}

}  // namespace rxnemb::chem
