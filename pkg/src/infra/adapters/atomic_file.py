"""임시 파일 + os.replace 원자적 쓰기."""

import os
from pathlib import Path
from typing import Callable, Union


def atomic_write(file_path: Union[str, Path], write: Callable[[Path], None]) -> None:
    """write(temp_path)로 임시 파일을 채운 뒤 대상 경로로 교체합니다.

    Raises:
        RuntimeError: 쓰기 또는 교체 실패 (임시 파일은 삭제)
    """
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_path = path.with_name(path.name + ".tmp")
    try:
        write(temp_path)
        os.replace(temp_path, path)
    except Exception as e:
        if temp_path.exists():
            try:
                temp_path.unlink()
            except Exception:
                pass
        raise RuntimeError(f"파일 저장 실패 ({path}): {e}")
