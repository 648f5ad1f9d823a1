from nfrkit import NfrQuestion, UseCaseModel, integrity_errors, validate_model


def warning_codes(model):
    return [(d.code, d.message) for d in validate_model(model)]


class TestValidateModel:
    def test_pos_fixture_warns_for_every_questionless_fr(self, pos_model):
        questioned = {q.use_case for q in pos_model.questions}
        expected = [uc for uc in pos_model.use_cases if uc not in questioned]
        assert len(expected) == 16
        got = validate_model(pos_model)
        assert [d.code for d in got] == ["fr-without-nfrq"] * 16
        assert [d.message.split('"')[1] for d in got] == expected
        assert any("Handle Coupon" in d.message for d in got)

    def test_full_fixture_is_warning_free(self, pos_full_model):
        assert validate_model(pos_full_model) == []

    def test_empty_model_is_vacuously_clean(self):
        assert validate_model(UseCaseModel(name="empty")) == []

    def test_idle_actor(self):
        model = UseCaseModel(name="M", actors=("Staff",))
        diags = validate_model(model)
        assert [d.code for d in diags] == ["idle-actor"]
        assert '"Staff"' in diags[0].message

    def test_unassociated_use_case(self):
        model = UseCaseModel(
            name="M",
            use_cases=("U",),
            questions=(NfrQuestion("NFRQ1", "U", "q"),),
        )
        assert [d.code for d in validate_model(model)] == ["unassociated-use-case"]

    def test_warning_order_use_cases_then_actors(self):
        model = UseCaseModel(name="M", actors=("A",), use_cases=("U",))
        assert [d.code for d in validate_model(model)] == [
            "fr-without-nfrq",
            "unassociated-use-case",
            "idle-actor",
        ]

    def test_pure_and_deterministic(self, pos_model):
        assert validate_model(pos_model) == validate_model(pos_model)

    def test_severity_is_warning(self, pos_model):
        assert {d.severity for d in validate_model(pos_model)} == {"warning"}


class TestIntegrityErrors:
    def test_fixtures_are_clean(self, pos_model, pos_full_model):
        assert integrity_errors(pos_model) == []
        assert integrity_errors(pos_full_model) == []

    def test_duplicate_actor(self):
        model = UseCaseModel(name="M", actors=("A", "A"))
        assert [d.code for d in integrity_errors(model)] == ["duplicate-actor"]

    def test_dangling_association(self):
        model = UseCaseModel(name="M", associations=(("A", "U"),))
        got = {d.code for d in integrity_errors(model)}
        assert got == {"undeclared-actor", "undeclared-use-case"}

    def test_dangling_question_target(self):
        model = UseCaseModel(
            name="M", questions=(NfrQuestion("NFRQ1", "Ghost", "q"),)
        )
        assert "undeclared-use-case" in {d.code for d in integrity_errors(model)}

    def test_malformed_and_duplicate_ids(self):
        model = UseCaseModel(
            name="M",
            use_cases=("U",),
            questions=(
                NfrQuestion("NFRQ01", "U", "a"),
                NfrQuestion("NFRQ2", "U", "b"),
                NfrQuestion("NFRQ2", "U", "c"),
            ),
        )
        got = [d.code for d in integrity_errors(model)]
        assert got == ["malformed-question-id", "duplicate-question-id"]

    def test_blank_question_text(self):
        model = UseCaseModel(
            name="M", use_cases=("U",), questions=(NfrQuestion("NFRQ1", "U", " \t"),)
        )
        assert "empty-question-text" in {d.code for d in integrity_errors(model)}

    def test_newline_in_name_rejected(self):
        model = UseCaseModel(name="a\nb")
        assert [d.code for d in integrity_errors(model)] == ["unrepresentable-text"]

    def test_placeholders_are_not_integrity_errors(self):
        model = UseCaseModel(
            name="M",
            use_cases=("U",),
            questions=(
                NfrQuestion("NFRQ?", "U", "a"),
                NfrQuestion("NFRQ?", "U", "b"),
            ),
        )
        assert integrity_errors(model) == []


class TestModelHelpers:
    def test_actors_for_follows_association_order(self, pos_model):
        assert pos_model.actors_for("Search") == ("User", "Staff")
        assert pos_model.actors_for("Process Sale") == ("Sales man",)
        assert pos_model.actors_for("Nonexistent") == ()

    def test_question_by_id(self, pos_model):
        assert pos_model.question_by_id("NFRQ3").use_case == "Search"
        assert pos_model.question_by_id("NFRQ99") is None

    def test_question_number(self):
        assert NfrQuestion("NFRQ12", "U", "q").number == 12
        assert NfrQuestion("NFRQ?", "U", "q").number is None

    def test_model_equality_is_structural(self, pos_model, fixtures_dir):
        from nfrkit import parse_model

        again = parse_model((fixtures_dir / "pos.ucm").read_bytes()).model
        assert again is not pos_model
        assert again == pos_model
