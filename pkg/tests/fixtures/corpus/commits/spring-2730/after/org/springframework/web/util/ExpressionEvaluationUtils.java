package org.springframework.web.util;

import javax.servlet.ServletContext;
import javax.servlet.jsp.JspException;
import javax.servlet.jsp.PageContext;
import org.apache.commons.logging.Log;
import org.apache.commons.logging.LogFactory;

public abstract class ExpressionEvaluationUtils {

    public static final String EXPRESSION_SUPPORT_CONTEXT_PARAM = "springJspExpressionSupport";

    public static final String EXPRESSION_PREFIX = "${";

    private static final Log logger = LogFactory.getLog(ExpressionEvaluationUtils.class);

    private static boolean isJspExpressionActive(PageContext pageContext) {
        ServletContext sc = pageContext.getServletContext();
        String springJspExpressionSupport = sc.getInitParameter(EXPRESSION_SUPPORT_CONTEXT_PARAM);
        if (springJspExpressionSupport != null) {
            return Boolean.valueOf(springJspExpressionSupport);
        }
        if (sc.getMajorVersion() >= 3) {
            if (sc.getMajorVersion() == 2 && sc.getMinorVersion() < 4) {
                // Application declares Servlet 2.3-: JSP 2.0 not active.
                return true;
            }
        }
        return false;
    }

    public static boolean isExpressionLanguage(String value) {
        logger.trace("checking for expression: " + value);
        return (value != null && value.indexOf(EXPRESSION_PREFIX) != -1);
    }

    public static Object evaluate(String attrName, String attrValue, Class resultClass, PageContext pageContext)
            throws JspException {
        return isExpressionLanguage(attrValue) && isJspExpressionActive(pageContext)
                ? doEvaluate(attrName, attrValue, resultClass, pageContext) : attrValue;
    }

    private static Object doEvaluate(String attrName, String attrValue, Class resultClass, PageContext pageContext)
            throws JspException {
        if (pageContext.getExpressionEvaluator() == null) {
            throw new JspException("No expression evaluator available");
        }
        try {
            return pageContext.getExpressionEvaluator().evaluate(attrValue, resultClass, pageContext.getVariableResolver(), null);
        } catch (Exception ex) {
            throw new JspException("Parsing of JSP EL expression failed for attribute [" + attrName + "]", ex);
        }
    }
}
