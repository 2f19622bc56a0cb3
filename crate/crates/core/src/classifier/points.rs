//! The finite category formed by the points of the object and arrow
//! presentations, with structure read off through the frame homs.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::category::{check_category, CategoryError, CategoryTables, FiniteCategory};
use crate::presentation::{point_pushforward, HomError, Point};

use super::ClassifierBundle;

#[derive(Clone, Debug)]
pub struct PointTables {
    pub core: bool,
    pub objects: Vec<Point>,
    pub arrows: Vec<Point>,
    /// Raw tables; entries a frame hom sent outside the point lists are
    /// reported by `check_category` rather than here.
    pub tables: CategoryTables,
}

#[derive(Clone, Debug)]
pub struct PointCategory {
    pub core: bool,
    pub objects: Vec<Point>,
    pub arrows: Vec<Point>,
    pub category: FiniteCategory,
}

impl PointCategory {
    pub fn object_index(&self, pt: &Point) -> Option<usize> {
        self.objects.binary_search(pt).ok()
    }

    pub fn arrow_index(&self, pt: &Point) -> Option<usize> {
        self.arrows.binary_search(pt).ok()
    }
}

impl ClassifierBundle {
    /// Enumerates points and pushes them through `s, t, e, m` (and `i` for
    /// the core). Composites use the composable-pair presentation.
    pub fn point_tables(&self, core: bool) -> Result<PointTables, HomError> {
        let (arrows_pres, s, t, e, m) = if core {
            (&self.g1_core, &self.core_s, &self.core_t, &self.core_e, &self.core_m)
        } else {
            (&self.g1, &self.s, &self.t, &self.e, &self.m)
        };
        let mut objects = self.g0.enumerate_points();
        let mut arrows = arrows_pres.enumerate_points();
        objects.sort();
        arrows.sort();
        let obj_index: BTreeMap<&Point, usize> = objects.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let arr_index: BTreeMap<&Point, usize> = arrows.iter().enumerate().map(|(i, p)| (p, i)).collect();
        // Out-of-range sentinels make `check_category` report a shape error.
        let miss_obj = objects.len();
        let miss_arr = arrows.len();
        let find_obj = |p: Point| obj_index.get(&p).copied().unwrap_or(miss_obj);
        let find_arr = |p: Point| arr_index.get(&p).copied().unwrap_or(miss_arr);

        let mut source = Vec::with_capacity(arrows.len());
        let mut target = Vec::with_capacity(arrows.len());
        for a in &arrows {
            source.push(find_obj(point_pushforward(s, a)?));
            target.push(find_obj(point_pushforward(t, a)?));
        }
        let identity = objects.iter().map(|x| point_pushforward(e, x).map(find_arr)).collect::<Result<Vec<_>, _>>()?;
        let mut compose = vec![vec![None; arrows.len()]; arrows.len()];
        for (f, fp) in arrows.iter().enumerate() {
            for (g, gp) in arrows.iter().enumerate() {
                if target[f] != source[g] {
                    continue;
                }
                if let Some(pair) = self.pair_point(fp, gp, core) {
                    compose[f][g] = Some(find_arr(point_pushforward(m, &pair)?));
                }
            }
        }
        let inverse = if core {
            Some(arrows.iter().map(|a| point_pushforward(&self.i, a).map(find_arr)).collect::<Result<Vec<_>, _>>()?)
        } else {
            None
        };
        let tables = CategoryTables { objects: objects.len(), source, target, identity, compose, inverse };
        Ok(PointTables { core, objects, arrows, tables })
    }

    pub fn point_category(&self, core: bool) -> Result<PointCategory, PointCategoryError> {
        let PointTables { core, objects, arrows, tables } = self.point_tables(core)?;
        let category = check_category(tables)?;
        Ok(PointCategory { core, objects, arrows, category })
    }
}

#[derive(Debug, Error)]
pub enum PointCategoryError {
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::ParameterSet;
    use crate::corpus;
    use crate::theory::TheoryOrientation;

    #[test]
    fn objects_point_category() {
        let b = ClassifierBundle::generate(&corpus::objects(), ParameterSet::new(2, TheoryOrientation::LH)).unwrap();
        let pc = b.point_category(false).unwrap();
        assert_eq!((pc.category.objects(), pc.category.arrows()), (5, 27));
        let core = b.point_category(true).unwrap();
        assert_eq!(core.category.arrows(), 12);
        assert!(core.category.is_groupoid());
        assert!(!pc.category.is_groupoid());
    }
}
