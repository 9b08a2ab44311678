"""Normalization of the Kaggle Titanic train table into the 5-attribute
nominal analysis dataset.

The recipe: Survived 0/1 becomes No/Yes, Pclass 1/2/3 becomes
1st/2nd/3rd, ages are bucketed into Child/Adolescent/Adult/Old with Unk
for blanks, the embarkation code becomes the port name with Unk for
blanks, then PassengerId, Pclass, Age, and the raw embarkation code are
dropped. The declared value orders below fix the nominal indices every
downstream report depends on.
"""

from __future__ import annotations

from .errors import DataError
from .tabular.model import AttributeSpec, Dataset, RawTable, remove_attributes

DEFAULT_RELATION = "train4-weka.filters.unsupervised.attribute.Remove-R1,3,6,8"

KAGGLE_COLUMNS = (
    "PassengerId", "Survived", "Pclass", "Name", "Sex", "Age",
    "SibSp", "Parch", "Ticket", "Fare", "Cabin", "Embarked",
)

AGE_GROUPS = ("Child", "Adolescent", "Adult", "Old", "Unk")
EMBARKED_NAMES = ("Southampton", "Cherbourg", "Queenstown", "Unk")
_PORTS = {"S": "Southampton", "C": "Cherbourg", "Q": "Queenstown"}
_CLASSES = {"1": "1st", "2": "2nd", "3": "3rd"}


def age_group(age: float | None) -> str:
    """Bucket an age in years: under 10 Child, under 20 Adolescent,
    under 50 Adult, otherwise Old; a missing age is Unk.

    Thresholds are strict, so 10, 20, and 50 land in the higher bucket,
    and fractional infant ages need no special casing.
    """
    if age is None:
        return "Unk"
    if age < 0:
        raise DataError(f"negative age {age!r}")
    if age < 10:
        return "Child"
    if age < 20:
        return "Adolescent"
    if age < 50:
        return "Adult"
    return "Old"


def embarked_name(code: str | None) -> str:
    """Map an embarkation code (S, C, Q) to the port name; missing is Unk."""
    if code is None:
        return "Unk"
    try:
        return _PORTS[code]
    except KeyError:
        raise DataError(f"unknown embarkation code {code!r}") from None


def normalize_titanic(raw: RawTable, relation: str = DEFAULT_RELATION) -> Dataset:
    """Convert the 12-column Kaggle train table into the analysis dataset.

    Builds the 9-column intermediate (PassengerId, Survived, Pclass,
    Class, Sex, Age, AgeGroup, Ecode, Embarked), then removes columns
    1, 3, 6, and 8, leaving Survived, Class, Sex, AgeGroup, and
    Embarked with Survived as the target. Every blank source cell maps
    to an explicit Unk category, so the result has no missing cells.
    """
    col = {name: raw.column_index(name) for name in KAGGLE_COLUMNS}
    attributes = (
        AttributeSpec("PassengerId", None),
        AttributeSpec("Survived", ("No", "Yes")),
        AttributeSpec("Pclass", None),
        AttributeSpec("Class", ("1st", "2nd", "3rd")),
        AttributeSpec("Sex", ("male", "female")),
        AttributeSpec("Age", None),
        AttributeSpec("AgeGroup", AGE_GROUPS),
        AttributeSpec("Ecode", ("S", "C", "Q")),
        AttributeSpec("Embarked", EMBARKED_NAMES),
    )
    by_name = {a.name: a for a in attributes}
    instances = []
    for r, row in enumerate(raw.rows):
        where = f"row {r + 1}"
        pid = row[col["PassengerId"]]
        if pid:
            where += f" (PassengerId {pid})"

        survived = row[col["Survived"]].strip()
        if survived == "0":
            survived_label = "No"
        elif survived == "1":
            survived_label = "Yes"
        else:
            raise DataError(f"{where}: Survived must be 0 or 1, got {survived!r}")

        pclass = row[col["Pclass"]].strip()
        try:
            class_label = _CLASSES[pclass]
        except KeyError:
            raise DataError(
                f"{where}: Pclass must be 1, 2, or 3, got {pclass!r}"
            ) from None

        sex = row[col["Sex"]].strip()
        if sex not in ("male", "female"):
            raise DataError(f"{where}: Sex must be male or female, got {sex!r}")

        age_text = row[col["Age"]].strip()
        if age_text:
            try:
                age = float(age_text)
            except ValueError:
                raise DataError(f"{where}: bad Age {age_text!r}") from None
            if age < 0:
                raise DataError(f"{where}: negative age {age_text!r}")
        else:
            age = None

        ecode = row[col["Embarked"]].strip() or None
        port = embarked_name(ecode)  # validates the code

        instances.append((
            _parse_optional_number(pid, where, "PassengerId"),
            by_name["Survived"].index_of(survived_label),
            float(pclass),
            by_name["Class"].index_of(class_label),
            by_name["Sex"].index_of(sex),
            age,
            by_name["AgeGroup"].index_of(age_group(age)),
            by_name["Ecode"].index_of(ecode) if ecode is not None else None,
            by_name["Embarked"].index_of(port),
        ))
    intermediate = Dataset(relation, attributes, tuple(instances), target_index=1)
    return remove_attributes(intermediate, "1,3,6,8")


def _parse_optional_number(text: str, where: str, name: str) -> float | None:
    text = text.strip()
    if not text:
        return None
    try:
        return float(text)
    except ValueError:
        raise DataError(f"{where}: bad {name} {text!r}") from None
