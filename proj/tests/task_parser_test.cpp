// Copyright 2026 The acceptlens Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "acceptlens/task_parser.hpp"

#include <gtest/gtest.h>

#include <random>

namespace acceptlens {
namespace {

using Lines = std::vector<std::string>;

TaskParseErrorKind error_kind(std::string_view text) {
  try {
    parse_tasks(text);
  } catch (const TaskParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return TaskParseErrorKind::YamlSyntax;
}

TEST(ParseTasks, InstallTaskShape) {
  const auto tasks = parse_tasks(
      "- name: Install nginx\n"
      "  ansible.builtin.package:\n"
      "    name: nginx\n"
      "    state: present\n");
  ASSERT_EQ(tasks.size(), 1u);
  const auto& t = tasks[0];
  EXPECT_EQ(*t.name, "Install nginx");
  EXPECT_EQ(t.module->segments, (Lines{"ansible", "builtin", "package"}));
  ASSERT_EQ(t.options.size(), 2u);
  EXPECT_EQ(t.options[0].first, "name");
  EXPECT_EQ(t.options[1].second, Value("present"));
  EXPECT_TRUE(t.directives.empty());
  EXPECT_EQ(t.raw_lines.size(), 4u);
  EXPECT_EQ(t.body_lines, (Lines{"ansible.builtin.package:", "  name: nginx", "  state: present"}));
}

TEST(ParseTasks, EmptyDocument) {
  EXPECT_TRUE(parse_tasks("").empty());
  EXPECT_TRUE(parse_tasks("---\n# nothing\n").empty());
}

TEST(ParseTasks, DirectivesAreNotOptions) {
  const auto tasks = parse_tasks(
      "- name: Check\n"
      "  ansible.builtin.command: uptime\n"
      "  register: out\n"
      "  tag: [a]\n"
      "  with_items: [1]\n");
  ASSERT_EQ(tasks.size(), 1u);
  const auto parts = task_parts(tasks[0]);
  EXPECT_EQ(parts.option_keys, (Lines{"_raw_params"}));
  EXPECT_EQ(parts.option_values[0], Value("uptime"));
  EXPECT_EQ(parts.directive_keys, (Lines{"register", "tag", "with_items"}));
}

TEST(ParseTasks, ModuleIsFirstNonDirectiveKey) {
  const auto tasks = parse_tasks(
      "- when: x\n"
      "  become: true\n"
      "  debug:\n"
      "    msg: hi\n"
      "  stray: 1\n");
  ASSERT_EQ(tasks.size(), 1u);
  EXPECT_EQ(tasks[0].module->str(), "debug");
  EXPECT_FALSE(tasks[0].name.has_value());
  const auto parts = task_parts(tasks[0]);
  EXPECT_EQ(parts.directive_keys, (Lines{"when", "become", "stray"}));
  EXPECT_EQ(parts.option_keys, (Lines{"msg"}));
}

TEST(ParseTasks, BlockTask) {
  const auto tasks = parse_tasks(
      "- name: Group\n"
      "  block:\n"
      "    - name: inner\n"
      "      ansible.builtin.debug:\n"
      "        msg: hi\n"
      "  become: true\n"
      "- name: after\n"
      "  ping:\n");
  ASSERT_EQ(tasks.size(), 2u);
  EXPECT_FALSE(tasks[0].module.has_value());
  EXPECT_TRUE(tasks[0].is_block());
  ASSERT_EQ(tasks[0].children.size(), 1u);
  EXPECT_EQ(tasks[0].children[0].depth, 1);
  EXPECT_EQ(tasks[0].children[0].body_lines, (Lines{"ansible.builtin.debug:", "  msg: hi"}));
  EXPECT_EQ(tasks[0].raw_lines.size(), 6u);
  EXPECT_EQ(tasks[1].module->str(), "ping");
  EXPECT_TRUE(tasks[1].options.empty());

  const auto flat = flatten_tasks(tasks);
  ASSERT_EQ(flat.size(), 3u);
  EXPECT_EQ(*flat[1]->name, "inner");
}

TEST(ParseTasks, PlaysAndFragments) {
  const auto tasks = parse_tasks(
      "- hosts: all\n"
      "  vars:\n"
      "    a: 1\n"
      "  tasks:\n"
      "    - name: one\n"
      "      ansible.builtin.ping:\n"
      "    - name: two\n"
      "      ansible.builtin.debug:\n"
      "        msg: \"{{ a }}\"\n"
      "\n"
      "- hosts: web\n"
      "  handlers:\n"
      "    - name: restart\n"
      "      service: {name: nginx, state: restarted}\n");
  ASSERT_EQ(tasks.size(), 3u);
  EXPECT_EQ(*tasks[1].name, "two");
  EXPECT_EQ(tasks[1].raw_lines.size(), 3u);
  EXPECT_EQ(tasks[1].body_lines, (Lines{"ansible.builtin.debug:", "  msg: \"{{ a }}\""}));
  EXPECT_EQ(tasks[2].module->str(), "service");

  const auto fragment = parse_tasks("ansible.builtin.debug:\n  msg: hi\n");
  ASSERT_EQ(fragment.size(), 1u);
  EXPECT_FALSE(fragment[0].name.has_value());
  EXPECT_EQ(fragment[0].body_lines, (Lines{"ansible.builtin.debug:", "  msg: hi"}));
}

TEST(ParseTasks, BodyExcludesNameWhereverItSits) {
  const auto tasks = parse_tasks(
      "    - ansible.builtin.copy:\n"
      "        src: a\n"
      "      name: >-\n"
      "        long name\n"
      "      register: r\n");
  ASSERT_EQ(tasks.size(), 1u);
  EXPECT_EQ(*tasks[0].name, "long name");
  EXPECT_EQ(tasks[0].body_lines, (Lines{"ansible.builtin.copy:", "  src: a", "register: r"}));
}

TEST(ParseTasks, NameOnlyEntriesAreSkipped) {
  const auto tasks = parse_tasks("- name: typed but empty\n- name: real\n  ping:\n");
  ASSERT_EQ(tasks.size(), 1u);
  EXPECT_EQ(*tasks[0].name, "real");
}

TEST(ParseTasks, Errors) {
  EXPECT_EQ(error_kind("- name: x\n  debug: [unclosed\n"), TaskParseErrorKind::YamlSyntax);
  EXPECT_EQ(error_kind("just a sentence"), TaskParseErrorKind::NotATaskShape);
  EXPECT_EQ(error_kind("- 1\n- 2\n"), TaskParseErrorKind::NotATaskShape);
  EXPECT_EQ(error_kind("- name: x\n  ansible.posix:\n    a: 1\n"), TaskParseErrorKind::BadModuleKey);
  try {
    parse_tasks("- name: x\n  debug:\n    msg: [a\n");
    FAIL();
  } catch (const TaskParseError& e) {
    EXPECT_GE(e.line(), 3);
  }
}

TEST(ParseModuleName, Forms) {
  EXPECT_EQ(parse_module_name("ansible.builtin.debug").segments, (Lines{"ansible", "builtin", "debug"}));
  EXPECT_TRUE(parse_module_name("ansible.builtin.debug").is_fqcn());
  EXPECT_EQ(parse_module_name("debug").segments, (Lines{"debug"}));
  EXPECT_THROW(parse_module_name("a.b"), TaskParseError);
  EXPECT_THROW(parse_module_name("a.b.c.d"), TaskParseError);
  EXPECT_THROW(parse_module_name("a..c"), TaskParseError);
}

TEST(ShortName, LastSegment) {
  EXPECT_EQ(short_name(parse_module_name("ansible.builtin.debug")), "debug");
  EXPECT_EQ(short_name(parse_module_name("shell")), "shell");
  EXPECT_EQ(short_name(parse_module_name("ansible.posix.mount")), "mount");
  for (const auto* fqcn : {"community.general.ufw", "ansible.windows.win_copy"}) {
    const auto m = parse_module_name(fqcn);
    EXPECT_EQ(parse_module_name(m.segments[0] + "." + m.segments[1] + "." + short_name(m)), m);
  }
}

TEST(Canonicalization, CosmeticDifferencesVanish) {
  const auto a = parse_tasks(
      "- copy:\n"
      "    mode: '0644'\n"
      "    force: yes\n"
      "    backup: ~\n"
      "    items: {b: 1, a: [x, 2.50]}\n");
  const auto b = parse_tasks(
      "- copy:\n"
      "    mode: \"0644\"\n"
      "    force: true\n"
      "    backup: null\n"
      "    items:\n"
      "      a: [\"x\", 2.5]\n"
      "      b: +1\n");
  EXPECT_EQ(a[0].options, b[0].options);
  EXPECT_EQ(a[0].options[3].second.dump(), R"({"a":["x",2.5],"b":1})");

  // A quoted "true" is a string, not a boolean.
  const auto c = parse_tasks("- copy:\n    force: 'true'\n");
  EXPECT_NE(c[0].options[0].second, a[0].options[1].second);
}

TEST(SerializeTasks, FixedPoint) {
  const std::vector<std::string> docs{
      "- name: a\n  ansible.builtin.copy:\n    src: x\n    mode: '0644'\n  register: r\n  when: x is defined\n",
      "- name: b\n  shell: echo hi && true\n  become: yes\n",
      "- block:\n    - debug: {msg: hi}\n    - ping:\n  rescue:\n    - fail: {msg: no}\n  tags: [t]\n",
      "- name: \"quote: 'x'\"\n  uri:\n    url: http://x\n    body: {a: [1, 2.5, null, true]}\n",
  };
  for (const auto& doc : docs) {
    const auto first = parse_tasks(doc);
    const auto text = serialize_tasks(first);
    const auto second = parse_tasks(text);
    ASSERT_EQ(first.size(), second.size()) << text;
    for (std::size_t i = 0; i < first.size(); ++i) EXPECT_TRUE(same_structure(first[i], second[i])) << text;
    EXPECT_EQ(serialize_tasks(second), text);
  }
}

TEST(SerializeTasks, RandomTasksFixedPoint) {
  std::mt19937 rng(3);
  const std::vector<std::string> scalars{"x", "'0644'", "yes", "12", "-3.5", "~", "\"a: b\"", "[1, two]", "{k: v}"};
  const std::vector<std::string> modules{"ansible.builtin.copy", "debug", "community.general.ufw"};
  const std::vector<std::string> directive_keys{"register", "when", "loop", "become", "tags"};
  for (int iter = 0; iter < 200; ++iter) {
    std::string doc = "- name: t" + std::to_string(iter) + "\n  " + modules[rng() % modules.size()] + ":\n";
    const int nopts = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < nopts; ++k) doc += "    o" + std::to_string(k) + ": " + scalars[rng() % scalars.size()] + "\n";
    if (rng() % 2) doc += "  " + directive_keys[rng() % directive_keys.size()] + ": " + scalars[rng() % scalars.size()] + "\n";
    const auto first = parse_tasks(doc);
    const auto second = parse_tasks(serialize_tasks(first));
    ASSERT_EQ(second.size(), 1u) << doc;
    EXPECT_TRUE(same_structure(first[0], second[0])) << doc;
    // Every key lands in exactly one of options / directives.
    for (const auto& [k, _] : first[0].options) EXPECT_FALSE(first[0].has_directive(k));
  }
}

}  // namespace
}  // namespace acceptlens
