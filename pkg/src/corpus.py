import os
from typing import List

from pydantic import BaseModel, Field

from src.parser import PinnedClaim, SurfaceSpecFile, load_claims, load_surface_spec

DEFAULT_CORPUS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "surfaces")


class CorpusEntry(BaseModel):
    name: str = Field(description="Folder name of the model")
    folder: str
    spec: SurfaceSpecFile
    claims: List[PinnedClaim] = Field(default_factory=list)


def list_model_folders(corpus_dir: str = DEFAULT_CORPUS) -> List[str]:
    """Model folders under the corpus directory, i.e. those holding a surface.json, sorted by name."""
    folders = []
    for item in sorted(os.listdir(corpus_dir)):
        path = os.path.join(corpus_dir, item)
        if os.path.isdir(path) and os.path.isfile(os.path.join(path, "surface.json")):
            folders.append(path)
    return folders


def load_model(folder: str) -> CorpusEntry:
    spec = load_surface_spec(os.path.join(folder, "surface.json"))
    claims_path = os.path.join(folder, "claims.json")
    claims = load_claims(claims_path) if os.path.isfile(claims_path) else []
    name = os.path.basename(os.path.normpath(folder))
    return CorpusEntry(name=name, folder=folder, spec=spec, claims=claims)


def load_corpus(corpus_dir: str = DEFAULT_CORPUS) -> List[CorpusEntry]:
    return [load_model(folder) for folder in list_model_folders(corpus_dir)]


if __name__ == "__main__":
    from rich import print

    entries = load_corpus()
    print(f"Found {len(entries)} models:")
    for entry in entries:
        print(f"  - {entry.name}: {len(entry.claims)} pinned claims")
