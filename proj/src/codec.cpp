#include "pentree/codec.hpp"

#include <algorithm>
#include <cmath>

#include "pentree/bijection.hpp"
#include "pentree/grammar.hpp"

namespace pentree {

namespace {

constexpr char kMagic[4] = {'P', '5', 'C', 'T'};
constexpr std::uint64_t kMaxSymbols = 1u << 28;

int a_spots(int subtype) {
  int k = 0;
  for (NodeKind c : subtype_children(subtype)) k += c == NodeKind::kA;
  return k;
}

int b_spots(int subtype) {
  int k = 0;
  for (NodeKind c : subtype_children(subtype)) k += c == NodeKind::kB;
  return k;
}

// child[i] is the node in slot c(i+1), -1 for a leg.
struct Node {
  int subtype = 0;
  int child[4] = {-1, -1, -1, -1};
};

bool is_subtree_slot(int subtype, int i) { return subtype_pattern(subtype)[i] == 'S'; }

NodeKind slot_kind(int subtype, int i) {
  const char* p = subtype_pattern(subtype);
  return (i == 3 || p[i + 1] == 'S') ? NodeKind::kB : NodeKind::kA;
}

std::vector<Node> nodes_from_preorder(const std::vector<std::uint8_t>& pre) {
  std::vector<Node> nodes(pre.size());
  std::vector<std::pair<int, int>> open;
  for (std::size_t k = 0; k < pre.size(); ++k) {
    const int s = pre[k];
    nodes[k].subtype = s;
    if (k == 0) {
      if (subtype_kind(s) != NodeKind::kA) throw CodecError("tree root is not an A-node");
    } else {
      if (open.empty()) throw CodecError("malformed tree");
      const auto [p, i] = open.back();
      open.pop_back();
      if (subtype_kind(s) != slot_kind(nodes[p].subtype, i)) throw CodecError("tree is not leg-balanced");
      nodes[p].child[i] = static_cast<int>(k);
    }
    for (int i = 3; i >= 0; --i)
      if (is_subtree_slot(s, i)) open.push_back({static_cast<int>(k), i});
  }
  if (!open.empty()) throw CodecError("malformed tree");
  return nodes;
}

std::vector<std::uint8_t> preorder_of(const std::vector<Node>& nodes, int root) {
  std::vector<std::uint8_t> out;
  out.reserve(nodes.size());
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    out.push_back(static_cast<std::uint8_t>(nodes[u].subtype));
    for (int i = 3; i >= 0; --i)
      if (nodes[u].child[i] >= 0) stack.push_back(nodes[u].child[i]);
  }
  return out;
}

// Node ids of a tree T_i (its A-root and the B-nodes below it without
// crossing A-nodes), in DFS order.
template <class Visit>
void walk_component(const std::vector<Node>& nodes, int root, Visit&& visit) {
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    visit(u);
    for (int i = 3; i >= 0; --i) {
      const int c = nodes[u].child[i];
      if (c >= 0 && subtype_kind(nodes[c].subtype) == NodeKind::kB) stack.push_back(c);
    }
  }
}

void validate_letters(const CodeWords& c) {
  if (c.w.empty()) throw CodecError("empty A-word");
  for (auto x : c.w)
    if (x >= 8) throw CodecError("letter out of range in A-word");
  for (auto x : c.wp)
    if (x >= 8) throw CodecError("letter out of range in B-word");
}

// Decoding steps shared by check_lukasiewicz and decode_words. Returns the
// failure indices; fills nodes and the root when both checks pass.
LukasiewiczCheck run_decode(const CodeWords& c, std::vector<Node>* out) {
  LukasiewiczCheck res;
  const int na = static_cast<int>(c.w.size());
  const int nb = static_cast<int>(c.wp.size());
  const int s = c.b_spots_of_b_nodes();
  {
    long long spots = 0;
    for (int i = 1; i < nb; ++i) {
      spots += b_spots(c.wp[i - 1] + 8);
      if (spots <= static_cast<long long>(i) + s - nb) {
        res.b_failure = i;
        return res;
      }
    }
  }
  std::vector<Node> nodes(na + nb);
  for (int i = 0; i < na; ++i) nodes[i].subtype = c.w[i];
  for (int j = 0; j < nb; ++j) nodes[na + j].subtype = c.wp[j] + 8;

  // B-forest.
  std::vector<int> roots;
  {
    std::vector<std::pair<int, int>> open;
    for (int j = 0; j < nb; ++j) {
      const int u = na + j;
      if (open.empty()) {
        roots.push_back(u);
      } else {
        const auto [p, i] = open.back();
        open.pop_back();
        nodes[p].child[i] = u;
      }
      for (int i = 3; i >= 0; --i)
        if (is_subtree_slot(nodes[u].subtype, i) && slot_kind(nodes[u].subtype, i) == NodeKind::kB)
          open.push_back({u, i});
    }
    if (!open.empty()) throw CodecError("B-word does not describe a forest");
  }
  // B-trees go to the B-spots of the A-nodes, left to right.
  {
    std::size_t next = 0;
    for (int v = 0; v < na; ++v)
      for (int i = 0; i < 4; ++i)
        if (is_subtree_slot(nodes[v].subtype, i) && slot_kind(nodes[v].subtype, i) == NodeKind::kB) {
          if (next >= roots.size()) throw CodecError("too few B-trees for the A-nodes");
          nodes[v].child[i] = roots[next++];
        }
    if (next != roots.size()) throw CodecError("too many B-trees for the A-nodes");
  }
  // A-spots of each T_i in DFS order.
  std::vector<std::vector<std::pair<int, int>>> spots(na);
  for (int v = 0; v < na; ++v) {
    std::vector<std::pair<int, int>> stack{{v, 0}};
    while (!stack.empty()) {
      auto& [u, i] = stack.back();
      if (i == 4) {
        stack.pop_back();
        continue;
      }
      const int slot = i++;
      const int st = nodes[u].subtype;
      if (!is_subtree_slot(st, slot)) continue;
      if (slot_kind(st, slot) == NodeKind::kA) spots[v].push_back({u, slot});
      else stack.push_back({nodes[u].child[slot], 0});
    }
  }
  {
    long long total = 0;
    for (int i = 1; i < na; ++i) {
      total += static_cast<long long>(spots[i - 1].size());
      if (total < i) {
        res.a_failure = i;
        return res;
      }
    }
  }
  if (!out) return res;
  std::vector<std::pair<int, int>> open;
  for (int v = 0; v < na; ++v) {
    if (v > 0) {
      if (open.empty()) throw CodecError("A-word does not aggregate");
      const auto [p, i] = open.back();
      open.pop_back();
      nodes[p].child[i] = v;
    }
    for (auto it = spots[v].rbegin(); it != spots[v].rend(); ++it) open.push_back(*it);
  }
  if (!open.empty()) throw CodecError("A-word leaves open spots");
  *out = std::move(nodes);
  return res;
}

void put_varint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

std::uint64_t get_varint(const std::string& in, std::size_t& pos) {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    if (pos >= in.size()) throw CodecError("truncated varint");
    const auto byte = static_cast<unsigned char>(in[pos++]);
    v |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
    if (!(byte & 0x80)) return v;
  }
  throw CodecError("varint too long");
}

class BitWriter {
 public:
  explicit BitWriter(std::string& out) : out_(out) {}
  void put(unsigned bit) {
    acc_ = static_cast<unsigned char>(acc_ << 1 | (bit & 1u));
    if (++fill_ == 8) flush();
  }
  void put_bits(unsigned value, int width) {
    for (int i = width - 1; i >= 0; --i) put(value >> i & 1u);
  }
  void finish() {
    if (fill_ == 0) return;
    acc_ = static_cast<unsigned char>(acc_ << (8 - fill_));
    flush();
  }

 private:
  void flush() {
    out_.push_back(static_cast<char>(acc_));
    acc_ = 0;
    fill_ = 0;
  }
  std::string& out_;
  unsigned char acc_ = 0;
  int fill_ = 0;
};

class BitReader {
 public:
  BitReader(const std::string& in, std::size_t pos) : in_(in), pos_(pos) {}
  // Reads zeros past the end.
  unsigned get() {
    if (pos_ >= in_.size()) return 0;
    const unsigned bit = static_cast<unsigned char>(in_[pos_]) >> (7 - bit_) & 1u;
    if (++bit_ == 8) {
      bit_ = 0;
      ++pos_;
    }
    return bit;
  }
  unsigned get_bits(int width) {
    unsigned v = 0;
    for (int i = 0; i < width; ++i) v = v << 1 | get();
    return v;
  }

 private:
  const std::string& in_;
  std::size_t pos_;
  int bit_ = 0;
};

// Integer arithmetic coder with 32-bit registers.
constexpr std::uint64_t kTop = 0xffffffffull;
constexpr std::uint64_t kHalf = 0x80000000ull;
constexpr std::uint64_t kQuarter = 0x40000000ull;

class ArithmeticEncoder {
 public:
  explicit ArithmeticEncoder(BitWriter& bits) : bits_(bits) {}
  void encode(std::uint64_t lo, std::uint64_t hi, std::uint64_t total) {
    const std::uint64_t range = high_ - low_ + 1;
    high_ = low_ + range * hi / total - 1;
    low_ = low_ + range * lo / total;
    while (true) {
      if (high_ < kHalf) {
        emit(0);
      } else if (low_ >= kHalf) {
        emit(1);
        low_ -= kHalf;
        high_ -= kHalf;
      } else if (low_ >= kQuarter && high_ < 3 * kQuarter) {
        ++pending_;
        low_ -= kQuarter;
        high_ -= kQuarter;
      } else {
        break;
      }
      low_ <<= 1;
      high_ = high_ << 1 | 1;
    }
  }
  void finish() {
    ++pending_;
    emit(low_ < kQuarter ? 0 : 1);
  }

 private:
  void emit(unsigned bit) {
    bits_.put(bit);
    for (; pending_ > 0; --pending_) bits_.put(bit ^ 1u);
  }
  BitWriter& bits_;
  std::uint64_t low_ = 0, high_ = kTop;
  long long pending_ = 0;
};

class ArithmeticDecoder {
 public:
  explicit ArithmeticDecoder(BitReader& bits) : bits_(bits) {
    for (int i = 0; i < 32; ++i) value_ = value_ << 1 | bits_.get();
  }
  std::uint64_t target(std::uint64_t total) const {
    const std::uint64_t range = high_ - low_ + 1;
    return ((value_ - low_ + 1) * total - 1) / range;
  }
  void consume(std::uint64_t lo, std::uint64_t hi, std::uint64_t total) {
    const std::uint64_t range = high_ - low_ + 1;
    high_ = low_ + range * hi / total - 1;
    low_ = low_ + range * lo / total;
    while (true) {
      if (high_ < kHalf) {
      } else if (low_ >= kHalf) {
        low_ -= kHalf;
        high_ -= kHalf;
        value_ -= kHalf;
      } else if (low_ >= kQuarter && high_ < 3 * kQuarter) {
        low_ -= kQuarter;
        high_ -= kQuarter;
        value_ -= kQuarter;
      } else {
        break;
      }
      low_ <<= 1;
      high_ = high_ << 1 | 1;
      value_ = value_ << 1 | bits_.get();
    }
  }

 private:
  BitReader& bits_;
  std::uint64_t low_ = 0, high_ = kTop, value_ = 0;
};

// Static model over a known multiset: counts go down as letters are coded.
void encode_word(ArithmeticEncoder& enc, const std::vector<std::uint8_t>& word, std::array<int, 8> counts) {
  std::uint64_t total = word.size();
  for (auto x : word) {
    std::uint64_t lo = 0;
    for (int j = 0; j < x; ++j) lo += counts[j];
    enc.encode(lo, lo + counts[x], total);
    --counts[x];
    --total;
  }
}

std::vector<std::uint8_t> decode_word(ArithmeticDecoder& dec, std::array<int, 8> counts, std::uint64_t length) {
  std::vector<std::uint8_t> word;
  word.reserve(length);
  std::uint64_t total = length;
  for (std::uint64_t k = 0; k < length; ++k) {
    const std::uint64_t t = dec.target(total);
    std::uint64_t lo = 0;
    int x = 0;
    while (x < 7 && lo + counts[x] <= t) lo += counts[x++];
    if (counts[x] == 0) throw CodecError("corrupt entropy payload");
    dec.consume(lo, lo + counts[x], total);
    --counts[x];
    --total;
    word.push_back(static_cast<std::uint8_t>(x));
  }
  return word;
}

std::size_t header_end(const std::string& blob, std::uint64_t& na, PackMode& mode) {
  if (blob.size() < 6 || !std::equal(kMagic, kMagic + 4, blob.begin())) throw CodecError("bad magic");
  if (static_cast<unsigned char>(blob[4]) != kBlobVersion)
    throw CodecError("unsupported version " + std::to_string(static_cast<unsigned char>(blob[4])));
  std::size_t pos = 5;
  na = get_varint(blob, pos);
  if (pos >= blob.size()) throw CodecError("truncated header");
  const auto m = static_cast<unsigned char>(blob[pos++]);
  if (m > 1) throw CodecError("unknown mode " + std::to_string(m));
  mode = static_cast<PackMode>(m);
  return pos;
}

}  // namespace

std::array<int, 8> CodeWords::a_counts() const {
  std::array<int, 8> n{};
  for (auto x : w) ++n.at(x);
  return n;
}

std::array<int, 8> CodeWords::b_counts() const {
  std::array<int, 8> n{};
  for (auto x : wp) ++n.at(x);
  return n;
}

int CodeWords::b_spots_of_b_nodes() const {
  int s = 0;
  for (auto x : wp) s += b_spots(x + 8);
  return s;
}

bool CodeWords::compatible() const {
  const auto n = a_counts();
  const auto m = b_counts();
  long long a_total = 0, b_total = 0, a_spot_total = 0, b_spot_total = 0;
  for (int j = 0; j < 8; ++j) {
    a_total += n[j];
    b_total += m[j];
    a_spot_total += static_cast<long long>(n[j]) * a_spots(j) + static_cast<long long>(m[j]) * a_spots(j + 8);
    b_spot_total += static_cast<long long>(n[j]) * b_spots(j) + static_cast<long long>(m[j]) * b_spots(j + 8);
  }
  // Every node but the root fills one spot of its own kind.
  return a_total >= 1 && a_spot_total == a_total - 1 && b_spot_total == b_total;
}

CodeWords classify_nodes(const PlantedTree& t) {
  if (!t.is_stub_planted() || t.kind() != 'A') throw CodecError("input is not a planted A-tree");
  std::vector<Node> nodes;
  try {
    nodes = nodes_from_preorder(preorder_subtypes(t));
  } catch (const TreeError& e) {
    throw CodecError(std::string("input is not a planted A-tree: ") + e.what());
  }
  CodeWords c;
  std::vector<int> a_nodes;
  for (std::size_t u = 0; u < nodes.size(); ++u)
    if (subtype_kind(nodes[u].subtype) == NodeKind::kA) {
      a_nodes.push_back(static_cast<int>(u));
      c.w.push_back(static_cast<std::uint8_t>(nodes[u].subtype));
    }
  for (int v : a_nodes)
    walk_component(nodes, v, [&](int u) {
      if (u != v) c.wp.push_back(static_cast<std::uint8_t>(nodes[u].subtype - 8));
    });
  return c;
}

LukasiewiczCheck check_lukasiewicz(const CodeWords& c) {
  validate_letters(c);
  if (!c.compatible()) throw CodecError("incompatible letter multiplicities");
  return run_decode(c, nullptr);
}

PlantedTree decode_words(const CodeWords& c) {
  validate_letters(c);
  if (!c.compatible()) throw CodecError("incompatible letter multiplicities");
  std::vector<Node> nodes;
  const auto res = run_decode(c, &nodes);
  if (res.b_failure >= 0)
    throw CodecError("B-word fails the forest condition at prefix " + std::to_string(res.b_failure));
  if (res.a_failure >= 0)
    throw CodecError("A-word fails the aggregation condition at index " + std::to_string(res.a_failure));
  return planted_from_preorder(preorder_of(nodes, 0), NodeKind::kA);
}

std::string pack_words(const CodeWords& c, PackMode mode) {
  validate_letters(c);
  std::string out(kMagic, kMagic + 4);
  out.push_back(static_cast<char>(kBlobVersion));
  put_varint(out, c.w.size());
  out.push_back(static_cast<char>(mode));
  BitWriter bits(out);
  if (mode == PackMode::kPacked) {
    put_varint(out, c.wp.size());
    for (auto x : c.w) bits.put_bits(x, 3);
    for (auto x : c.wp) bits.put_bits(x, 3);
  } else {
    const auto na = c.a_counts(), nb = c.b_counts();
    for (int v : na) put_varint(out, v);
    for (int v : nb) put_varint(out, v);
    ArithmeticEncoder enc(bits);
    encode_word(enc, c.w, na);
    encode_word(enc, c.wp, nb);
    enc.finish();
  }
  bits.finish();
  return out;
}

CodeWords unpack_words(const std::string& blob) {
  std::uint64_t na = 0;
  PackMode mode{};
  std::size_t pos = header_end(blob, na, mode);
  if (na == 0 || na > kMaxSymbols) throw CodecError("bad A-word length");
  CodeWords c;
  if (mode == PackMode::kPacked) {
    const std::uint64_t nb = get_varint(blob, pos);
    if (nb > kMaxSymbols) throw CodecError("bad B-word length");
    if ((na + nb) * 3 > (blob.size() - pos) * 8) throw CodecError("truncated payload");
    BitReader bits(blob, pos);
    c.w.resize(na);
    c.wp.resize(nb);
    for (auto& x : c.w) x = static_cast<std::uint8_t>(bits.get_bits(3));
    for (auto& x : c.wp) x = static_cast<std::uint8_t>(bits.get_bits(3));
  } else {
    std::array<int, 8> ca{}, cb{};
    std::uint64_t sa = 0, sb = 0;
    for (int& v : ca) {
      const auto x = get_varint(blob, pos);
      if (x > kMaxSymbols) throw CodecError("bad letter count");
      v = static_cast<int>(x);
      sa += x;
    }
    for (int& v : cb) {
      const auto x = get_varint(blob, pos);
      if (x > kMaxSymbols) throw CodecError("bad letter count");
      v = static_cast<int>(x);
      sb += x;
    }
    if (sa != na) throw CodecError("letter counts disagree with the A-word length");
    BitReader bits(blob, pos);
    ArithmeticDecoder dec(bits);
    c.w = decode_word(dec, ca, sa);
    c.wp = decode_word(dec, cb, sb);
  }
  return c;
}

std::size_t symbol_bits(const std::string& blob) {
  std::uint64_t na = 0;
  PackMode mode{};
  std::size_t pos = header_end(blob, na, mode);
  const int counts = mode == PackMode::kPacked ? 1 : 16;
  for (int i = 0; i < counts; ++i) get_varint(blob, pos);
  return (blob.size() - pos) * 8;
}

double multinomial_bits(const CodeWords& c) {
  auto bits = [](const std::array<int, 8>& n) {
    double total = 0;
    double v = 0;
    for (int x : n) {
      total += x;
      v -= std::lgamma(x + 1.0);
    }
    return (v + std::lgamma(total + 1.0)) / std::log(2.0);
  };
  return bits(c.a_counts()) + bits(c.b_counts());
}

PlantedTree map_to_a_tree(const PlaneMap& m) {
  if (!is_5connected_triangulation(m)) throw CodecError("input is not a 5-connected triangulation");
  int apex = -1;
  for (int v = 0; v < m.num_vertices(); ++v)
    if (m.degree(v) == 5) {
      apex = v;
      break;
    }
  if (apex < 0) throw CodecError("no vertex of degree 5");
  const PlaneMap inner = delete_apex(m.with_root(m.vertex_dart(apex)));
  const PlaneTree tau = map_to_tree(inner);
  int cut = -1;
  for (int u = 0; u < tau.num_nodes() && cut < 0; ++u) {
    int edges = 0;
    for (int i = 0; i < tau.degree(u); ++i) edges += tau.is_edge(u, i);
    if (edges == 1) cut = u;
  }
  if (cut < 0) throw CodecError("tree has no node with a single inner edge");
  auto rot = tau.rotations();
  int root = -1, root_slot = -1;
  std::vector<std::vector<int>> kept;
  kept.reserve(rot.size() - 1);
  for (int u = 0; u < static_cast<int>(rot.size()); ++u) {
    if (u == cut) continue;
    auto r = rot[u];
    for (int i = 0; i < static_cast<int>(r.size()); ++i) {
      if (r[i] == cut) {
        r[i] = kStub;
        root = u > cut ? u - 1 : u;
        root_slot = i;
      } else if (r[i] > cut) {
        --r[i];
      }
    }
    kept.push_back(std::move(r));
  }
  PlantedTree out{PlaneTree::from_rotations(kept), root, root_slot};
  if (out.kind() != 'A') throw CodecError("cut tree is not an A-tree");
  return out;
}

PlaneMap a_tree_to_map(const PlantedTree& a) {
  if (!a.is_stub_planted() || a.kind() != 'A') throw CodecError("input is not a planted A-tree");
  auto rot = a.tree.rotations();
  const int leaf = static_cast<int>(rot.size());
  rot[a.root][a.root_slot] = leaf;
  rot.push_back({a.root, kLeg, kLeg, kLeg, kLeg});
  const PlaneTree tau = PlaneTree::from_rotations(rot);
  const PlaneMap m = tree_to_map(tau);
  const auto aug = augment_apex(root_at_outer_vertex(m, m.num_vertices() - 1));
  if (!aug.five_connected) throw CodecError("decoded map is not 5-connected");
  return aug.map;
}

std::string encode_map(const PlaneMap& m, PackMode mode) {
  return pack_words(classify_nodes(map_to_a_tree(m)), mode);
}

PlaneMap decode_map(const std::string& blob) { return a_tree_to_map(decode_words(unpack_words(blob))); }

}  // namespace pentree
