#include "pta/frontend.hpp"

namespace pta {

namespace {

class Compiler {
 public:
  Pcfa a{2};

  void compile(const Stmt& s, Location entry, Location exit) {
    switch (s.kind) {
      case Stmt::Kind::Skip: a.add_transition(entry, Label::skip(), exit); break;
      case Stmt::Kind::Assign:
        a.add_transition(entry,
                         s.int_rhs ? Label::assign(s.var, *s.int_rhs)
                                   : Label::assign_bool(s.var, *s.bool_rhs),
                         exit);
        break;
      case Stmt::Kind::Seq: {
        if (s.body.empty()) {
          a.add_transition(entry, Label::skip(), exit);
          break;
        }
        Location cur = entry;
        for (std::size_t i = 0; i < s.body.size(); ++i) {
          Location next = i + 1 == s.body.size() ? exit : a.add_location();
          compile(s.body[i], cur, next);
          cur = next;
        }
        break;
      }
      case Stmt::Kind::If: {
        Location t = a.add_location(), f = a.add_location();
        a.add_transition(entry, Label::assume(s.cond), t);
        a.add_transition(entry, Label::assume(!s.cond), f);
        compile(s.body[0], t, exit);
        compile(s.body[1], f, exit);
        break;
      }
      case Stmt::Kind::While: {
        // The loop head is the entry location itself.
        Location b = a.add_location();
        a.add_transition(entry, Label::assume(s.cond), b);
        compile(s.body[0], b, entry);
        a.add_transition(entry, Label::assume(!s.cond), exit);
        break;
      }
      case Stmt::Kind::ProbChoice:
      case Stmt::Kind::NondetChoice: {
        bool prob = s.kind == Stmt::Kind::ProbChoice;
        Location l = a.add_location(), r = a.add_location();
        a.add_transition(entry, prob ? Label::pb(s.id, Dir::L) : Label::nd(2 * s.id), l);
        a.add_transition(entry, prob ? Label::pb(s.id, Dir::R) : Label::nd(2 * s.id + 1), r);
        compile(s.body[0], l, exit);
        compile(s.body[1], r, exit);
        break;
      }
    }
  }
};

}  // namespace

Pcfa to_pcfa(const Program& program) {
  Compiler c;
  c.a.set_initial(0);
  c.a.set_accepting(1);
  c.compile(program.body, 0, 1);
  return c.a;
}

}  // namespace pta
